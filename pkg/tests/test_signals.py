import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stlf.errors import EmptyTrace, EmptyWindow, InsufficientTrace, NonUniformSampling, ParseError
from stlf.signals import (
    BoolKind,
    EnumKind,
    RealKind,
    Signal,
    TimeIndexWindow,
    Trace,
    load_trace_csv,
    parse_kind,
    trace_to_rows,
    window_of,
    write_trace_csv,
)
from stlf.stl import Interval


class TestWindow:
    def test_integer_interval(self):
        assert window_of(Interval(0, 2), 0, 5, 1.0) == TimeIndexWindow(0, 2)

    def test_rounding(self):
        assert window_of(Interval(0.5, 1.5), 0, 5, 1.0) == TimeIndexWindow(1, 1)

    def test_unbounded(self):
        assert window_of(None, 2, 5, 1.0) == TimeIndexWindow(2, 4)
        assert window_of(Interval(1, None), 2, 5, 1.0) == TimeIndexWindow(3, 4)

    def test_step_scaling(self):
        assert window_of(Interval(0.3, 0.9), 1, 20, 0.1) == TimeIndexWindow(4, 10)

    def test_strict_past_end(self):
        with pytest.raises(InsufficientTrace):
            window_of(Interval(0, 5), 0, 5, 1.0)

    def test_clamp(self):
        assert window_of(Interval(2, 9), 1, 5, 1.0, clamp=True) == TimeIndexWindow(3, 4)

    def test_clamp_empty(self):
        with pytest.raises(EmptyWindow):
            window_of(Interval(7, 9), 1, 5, 1.0, clamp=True)

    def test_no_grid_point(self):
        with pytest.raises(EmptyWindow):
            window_of(Interval(0.2, 0.8), 0, 5, 1.0)

    def test_bad_start(self):
        with pytest.raises(IndexError):
            window_of(None, 5, 5, 1.0)

    @given(
        st.integers(0, 5), st.integers(0, 5), st.integers(0, 3), st.integers(0, 3),
        st.integers(0, 9), st.booleans(),
    )
    def test_monotone(self, a, w, da, dw, t, clamp):
        n = 10
        try:
            small = window_of(Interval(a, a + w), t, n, 1.0, clamp)
            big = window_of(Interval(max(a - da, 0), a + w + dw), t, n, 1.0, clamp)
        except (InsufficientTrace, EmptyWindow):
            return
        assert set(small.indices()) <= set(big.indices())


class TestKinds:
    @pytest.mark.parametrize("text,kind", [
        ("real", RealKind()),
        ("real[0,10]", RealKind(0, 10)),
        ("real[-inf, 2.5]", RealKind(None, 2.5)),
        ("bool", BoolKind()),
        ("enum{a, b,c}", EnumKind(("a", "b", "c"))),
    ])
    def test_parse(self, text, kind):
        assert parse_kind(text) == kind

    def test_parse_round_trip(self):
        for k in (RealKind(0, 10), RealKind(-1.5, None), BoolKind(), EnumKind(("x", "y"))):
            assert parse_kind(str(k)) == k

    def test_bad(self):
        with pytest.raises(ParseError):
            parse_kind("integer")

    def test_range_checked(self):
        with pytest.raises(ValueError):
            Signal("x", RealKind(0, 1), 1.0, [0.5, 2.0])
        with pytest.raises(ValueError):
            Signal("m", EnumKind(("a",)), 1.0, ["b"])

    def test_trace_shape(self):
        with pytest.raises(ValueError):
            Trace({"x": Signal("x", RealKind(), 1.0, [1]), "y": Signal("y", RealKind(), 1.0, [1, 2])})
        with pytest.raises(ValueError):
            Signal("x", RealKind(), 0.0, [1])


class TestCsv:
    def test_simple(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("time,x\n0,1\n1,2\n2,3\n")
        tr = load_trace_csv(p)
        assert (tr.length, tr.step) == (3, 1.0)
        assert tr["x"].samples == (1.0, 2.0, 3.0)

    def test_kind_row(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text('time,x,b,m\nkind,"real[0,5]",bool,"enum{on,off}"\n0,1,1,on\n0.5,2,0,off\n')
        tr = load_trace_csv(p)
        assert tr.step == 0.5
        assert tr["b"].samples == (True, False)
        assert tr["m"].kind == EnumKind(("on", "off"))

    def test_nonuniform(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("time,x\n0,1\n1,2\n2.5,3\n")
        with pytest.raises(NonUniformSampling):
            load_trace_csv(p)

    def test_header_only(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("time,x\n")
        with pytest.raises(EmptyTrace):
            load_trace_csv(p)

    def test_bad_cell(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("time,x\n0,1\n1,abc\n")
        with pytest.raises(ParseError):
            load_trace_csv(p)

    def test_missing_time(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("x,y\n0,1\n")
        with pytest.raises(ParseError) as err:
            load_trace_csv(p)
        assert err.value.line == 1

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=12),
        st.sampled_from([1.0, 0.1, 0.25, 1e-3]),
    )
    def test_round_trip(self, tmp_path_factory, xs, step):
        # a single row carries no step, so traces start at two samples
        p = tmp_path_factory.mktemp("rt") / "t.csv"
        n = len(xs)
        tr = Trace.from_columns(
            step,
            {"x": xs, "b": [i % 2 == 0 for i in range(n)], "m": ["a" if i % 3 else "b" for i in range(n)]},
            {"b": BoolKind(), "m": EnumKind(("a", "b"))},
        )
        write_trace_csv(tr, p)
        assert load_trace_csv(p) == tr

    def test_rows(self):
        tr = Trace.from_columns(1.0, {"x": [1, 2, 3]})
        assert trace_to_rows(tr, 1) == [{"time": 1.0, "x": 2}, {"time": 2.0, "x": 3}]
