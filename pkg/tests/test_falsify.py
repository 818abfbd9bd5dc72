import math
import random

import pytest

from stlf.falsify import (
    SearchConfig,
    SearchSpace,
    falsify_campaign,
    hill_climb,
    safe_hill_climb,
    tweak,
)
from stlf.models import Constant, InputAssignment, PiecewiseConstant, SimConfig, parse_model
from stlf.models.catalog import builtin_models
from stlf.stl import ZERO, parse_requirements, to_core, parse_stl

MIXED = parse_model(
    "input a: real[0,10]; input b: bool; input m: enum{x, y, z};"
    "output o = if b then a else 0;"
)


class FixedRng:
    """Deterministic stand-in for random.Random."""

    def __init__(self, gauss=0.0, uniform=0.0):
        self._gauss = gauss
        self._uniform = uniform
        self.sigmas = []

    def gauss(self, mu, sigma):
        self.sigmas.append(sigma)
        return self._gauss

    def random(self):
        return self._uniform

    def choice(self, seq):
        return seq[0]


class TestSearchSpace:
    def test_dims(self):
        space = SearchSpace.from_model(MIXED, segments=2)
        assert [(d.name, d.segment) for d in space.dims] == [
            ("a", 0), ("a", 1), ("b", 0), ("b", 1), ("m", 0), ("m", 1),
        ]

    def test_decode_encode(self):
        space = SearchSpace.from_model(MIXED, segments=2)
        values = (1.0, 2.0, True, False, "y", "z")
        a = space.decode(values)
        assert a["a"] == PiecewiseConstant((1.0, 2.0))
        assert space.encode(a) == values

    def test_single_segment_constants(self):
        space = SearchSpace.from_model(MIXED)
        assert space.decode((3.0, True, "x"))["a"] == Constant(3.0)

    def test_random_point_in_range(self):
        space = SearchSpace.from_model(MIXED, segments=3)
        rng = random.Random(0)
        for _ in range(200):
            assert space.contains(space.random_point(rng))

    def test_range_override(self):
        space = SearchSpace.from_model(MIXED, ranges={"a": (2, 3)})
        assert space.dims[0].kind.lo == 2
        with pytest.raises(ValueError):
            SearchSpace.from_model(MIXED, ranges={"a": (-1, 3)})
        with pytest.raises(ValueError):
            SearchSpace.from_model(MIXED, ranges={"q": (0, 1)})

    def test_no_inputs(self, counter):
        with pytest.raises(ValueError):
            SearchSpace.from_model(counter)


class TestTweak:
    def test_variance_is_fraction_of_range(self):
        space = SearchSpace.from_model(MIXED)
        rng = FixedRng()
        tweak((5.0, True, "x"), space, SearchConfig(), rng)
        assert rng.sigmas == [pytest.approx(math.sqrt(0.1 * 10))]

    @pytest.mark.parametrize("step,start,expected", [(100.0, 5.0, 10.0), (-100.0, 5.0, 0.0), (1.5, 2.0, 3.5)])
    def test_capped(self, step, start, expected):
        space = SearchSpace.from_model(MIXED)
        out = tweak((start, True, "x"), space, SearchConfig(), FixedRng(gauss=step, uniform=0.99))
        assert out[0] == expected

    def test_flip(self):
        space = SearchSpace.from_model(MIXED)
        out = tweak((1.0, True, "x"), space, SearchConfig(), FixedRng(uniform=0.0))
        assert out[1:] == (False, "y")

    def test_no_flip(self):
        space = SearchSpace.from_model(MIXED)
        # each discrete value flips with probability 1/3 here
        out = tweak((1.0, True, "x"), space, SearchConfig(), FixedRng(uniform=0.34))
        assert out[1:] == (True, "x")

    def test_flip_rate(self):
        space = SearchSpace.from_model(MIXED)
        rng = random.Random(1)
        flips = sum(tweak((1.0, True, "x"), space, SearchConfig(), rng)[1] is False for _ in range(6000))
        assert abs(flips / 6000 - 1 / 3) < 0.03

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SearchConfig(iterations=0)
        with pytest.raises(ValueError):
            SearchConfig(sigma_fraction=0)


@pytest.fixture
def tustin():
    return builtin_models()["tustin_lite"]


class TestHillClimb:
    def test_monotone_history(self, tustin):
        space = SearchSpace.from_model(tustin.model)
        f = to_core(parse_stl("G(abs(out) <= 2.5)"))
        for seed in range(5):
            r = hill_climb(tustin.model, f, space, SearchConfig(iterations=60), seed)
            assert all(b <= a for a, b in zip(r.history, r.history[1:]))
            assert r.history[-1] == r.best_fitness

    def test_full_run_count(self, tustin):
        space = SearchSpace.from_model(tustin.model)
        f = tustin.requirement("R1").core
        r = hill_climb(tustin.model, f, space, SearchConfig(iterations=37), 3)
        assert not r.violated
        assert r.iterations == 37
        assert len(r.history) == 38

    def test_early_stop(self, tustin):
        fault = tustin.fault("loose_saturation").model
        space = SearchSpace.from_model(fault)
        f = tustin.requirement("R1").core
        r = hill_climb(fault, f, space, SearchConfig(iterations=150), 0)
        assert r.violated
        assert r.history[-1] < ZERO
        assert all(h >= ZERO for h in r.history[:-1])
        assert r.iterations == len(r.history) - 1 == r.found_at

    def test_no_early_stop(self, tustin):
        fault = tustin.fault("loose_saturation").model
        space = SearchSpace.from_model(fault)
        cfg = SearchConfig(iterations=20, stop_on_violation=False)
        r = hill_climb(fault, tustin.requirement("R1").core, space, cfg, 0)
        assert r.iterations == 20

    def test_seeded(self, tustin):
        space = SearchSpace.from_model(tustin.model)
        f = tustin.requirement("R3").core
        a = hill_climb(tustin.model, f, space, SearchConfig(iterations=30), 11)
        b = hill_climb(tustin.model, f, space, SearchConfig(iterations=30), 11)
        assert a == b

    def test_errors_recorded(self):
        m = parse_model("input i: real[0,1]; output o = 1 / (i - i);")
        space = SearchSpace.from_model(m)
        r = safe_hill_climb(m, to_core(parse_stl("G(o > 0)")), space, SearchConfig(iterations=3), 0)
        assert r.error.startswith("DomainError")
        assert r.best_fitness is None and not r.violated


class TestCampaign:
    def test_report(self, tustin):
        fault = tustin.fault("loose_saturation").model
        space = SearchSpace.from_model(fault)
        cfg = SearchConfig(iterations=40, runs=4, base_seed=5)
        rep = falsify_campaign(fault, tustin.requirements, space, cfg, tustin.sim_config)
        r1 = rep.requirements[0]
        assert [x.seed for x in r1.results] == [5, 6, 7, 8]
        assert r1.notation == "1(4/4)"
        assert rep.notation == "1(4/4)"
        data = rep.to_json()
        assert data["config"]["runs"] == 4
        assert data["requirements"][0]["best_witness"]["trace_excerpt"]
        assert "wall_time" not in rep.dumps()
        assert rep.to_csv().splitlines()[1].startswith("tustin_lite,R1,4,4,1(4/4)")

    def test_grouped_notation(self):
        m = parse_model("input a: real[0,1]; output o = a;")
        reqs = parse_requirements("A: G(o < 2)\nB: G(o < -1)\nC: G(o < 0.3)\n")
        cfg = SearchConfig(iterations=1, runs=6)
        rep = falsify_campaign(m, reqs, SearchSpace.from_model(m), cfg, SimConfig(2))
        counts = {r.name: r.violations for r in rep.requirements}
        assert counts["A"] == 0 and counts["B"] == 6
        expected = [f"1({counts['B']}/6)"]
        if counts["C"]:
            expected.append(f"1({counts['C']}/6)")
        if counts["C"] == 6:
            expected = ["2(6/6)"]
        assert rep.notation == ", ".join(expected)

    def test_serial_equals_parallel(self, tustin):
        fault = tustin.fault("loose_saturation").model
        space = SearchSpace.from_model(fault, segments=2)
        cfg = SearchConfig(iterations=30, runs=6, base_seed=2)
        serial = falsify_campaign(fault, tustin.requirements, space, cfg, tustin.sim_config, jobs=1)
        parallel = falsify_campaign(fault, tustin.requirements, space, cfg, tustin.sim_config, jobs=3)
        assert serial.dumps() == parallel.dumps()
        for a, b in zip(serial.requirements, parallel.requirements):
            assert a.results == b.results
