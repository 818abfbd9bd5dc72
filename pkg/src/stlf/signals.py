"""Sampled signals, traces, window discretization and trace CSV I/O.

All time is discrete: sample ``i`` of a trace sits at time ``i * step``.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, NamedTuple

from stlf.errors import (
    EmptyTrace,
    EmptyWindow,
    InsufficientTrace,
    NonUniformSampling,
    ParseError,
)

# Relative tolerance used when snapping interval bounds onto the sample grid
# and when checking that a CSV time column is uniform.
GRID_RTOL = 1e-9


@dataclass(frozen=True)
class RealKind:
    lo: float | None = None
    hi: float | None = None

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ValueError(f"empty real range [{self.lo}, {self.hi}]")

    @property
    def bounded(self):
        return self.lo is not None and self.hi is not None

    def contains(self, value):
        if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
            return False
        if self.lo is not None and value < self.lo:
            return False
        if self.hi is not None and value > self.hi:
            return False
        return not (isinstance(value, float) and math.isnan(value))

    def __str__(self):
        if self.lo is None and self.hi is None:
            return "real"
        return f"real[{_fmt_bound(self.lo, '-inf')},{_fmt_bound(self.hi, 'inf')}]"


@dataclass(frozen=True)
class BoolKind:
    def contains(self, value):
        return isinstance(value, bool)

    def __str__(self):
        return "bool"


@dataclass(frozen=True)
class EnumKind:
    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels or len(set(self.labels)) != len(self.labels):
            raise ValueError(f"enum labels must be nonempty and distinct: {self.labels}")

    def contains(self, value):
        return value in self.labels

    def index(self, label):
        return self.labels.index(label)

    def __str__(self):
        return "enum{" + ",".join(self.labels) + "}"


Kind = RealKind | BoolKind | EnumKind


def _fmt_bound(x, missing):
    if x is None:
        return missing
    return repr(float(x)) if not float(x).is_integer() else str(int(x))


_KIND_RE = re.compile(
    r"""^\s*(?:
        (?P<real>real)\s*(?:\[\s*(?P<lo>[^,\]]+)\s*,\s*(?P<hi>[^\]]+)\s*\])?
      | (?P<bool>bool(?:ean)?)
      | enum\s*\{(?P<labels>[^}]*)\}
    )\s*$""",
    re.X,
)


def parse_kind(text: str) -> Kind:
    """Parse ``real``, ``real[lo,hi]``, ``bool`` or ``enum{a,b}``."""
    m = _KIND_RE.match(text)
    if not m:
        raise ParseError(f"bad kind declaration {text!r}")
    if m.group("real"):
        lo, hi = m.group("lo"), m.group("hi")
        if lo is None:
            return RealKind()
        try:
            lo_v = None if lo.strip() == "-inf" else float(lo)
            hi_v = None if hi.strip() in ("inf", "+inf") else float(hi)
            return RealKind(lo_v, hi_v)
        except ValueError as exc:
            raise ParseError(f"bad real range in {text!r}: {exc}") from None
    if m.group("bool"):
        return BoolKind()
    labels = tuple(s.strip() for s in m.group("labels").split(","))
    try:
        return EnumKind(labels)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


@dataclass(frozen=True)
class Signal:
    name: str
    kind: Kind
    step: float
    samples: tuple

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        if not self.step > 0:
            raise ValueError(f"signal {self.name}: step must be positive")
        if not self.samples:
            raise ValueError(f"signal {self.name}: no samples")
        for i, v in enumerate(self.samples):
            if not self.kind.contains(v):
                raise ValueError(
                    f"signal {self.name}: sample {i} = {v!r} outside {self.kind}"
                )

    def __len__(self):
        return len(self.samples)

    @property
    def duration(self):
        return (len(self.samples) - 1) * self.step

    def numeric(self):
        """Samples as numbers: bools map to 0/1, enum labels to their index."""
        if isinstance(self.kind, BoolKind):
            return tuple(int(v) for v in self.samples)
        if isinstance(self.kind, EnumKind):
            return tuple(self.kind.index(v) for v in self.samples)
        return self.samples


@dataclass(frozen=True)
class Trace:
    signals: Mapping[str, Signal]
    step: float = field(init=False)
    length: int = field(init=False)

    def __post_init__(self):
        sigs = dict(self.signals)
        if not sigs:
            raise ValueError("a trace needs at least one signal")
        first = next(iter(sigs.values()))
        for name, s in sigs.items():
            if name != s.name:
                raise ValueError(f"signal keyed {name!r} is named {s.name!r}")
            if s.step != first.step or len(s) != len(first):
                raise ValueError("all signals of a trace must share step and length")
        object.__setattr__(self, "signals", MappingProxyType(sigs))
        object.__setattr__(self, "step", first.step)
        object.__setattr__(self, "length", len(first))

    @classmethod
    def from_columns(cls, step, columns, kinds=None):
        """Build a trace from ``{name: samples}``; kinds default to unbounded real."""
        kinds = kinds or {}
        return cls(
            {
                name: Signal(name, kinds.get(name, RealKind()), step, values)
                for name, values in columns.items()
            }
        )

    def __len__(self):
        return self.length

    def __getitem__(self, name) -> Signal:
        return self.signals[name]

    def __contains__(self, name):
        return name in self.signals

    def __eq__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        return dict(self.signals) == dict(other.signals)

    def __hash__(self):
        return hash(tuple(sorted(self.signals)))

    def __reduce__(self):
        return (Trace, (dict(self.signals),))

    def names(self):
        return list(self.signals)

    def prefix(self, length):
        return Trace(
            {n: Signal(n, s.kind, s.step, s.samples[:length]) for n, s in self.signals.items()}
        )


class TimeIndexWindow(NamedTuple):
    lo_index: int
    hi_index: int

    def indices(self):
        return range(self.lo_index, self.hi_index + 1)


def grid_index(offset: float, step: float, rounding) -> int:
    """``rounding(offset / step)`` with quotients near an integer snapped onto it."""
    q = offset / step
    r = round(q)
    if abs(q - r) <= GRID_RTOL * max(1.0, abs(q)):
        return int(r)
    return int(rounding(q))


def window_offsets(interval, step):
    """Sample offsets ``(lo, hi)`` of an interval; ``hi`` is None when unbounded."""
    if interval is None:
        return 0, None
    a, b = interval
    lo = grid_index(a, step, math.ceil)
    hi = None if b is None or b == math.inf else grid_index(b, step, math.floor)
    if hi is not None and lo > hi:
        raise EmptyWindow(f"interval [{a}, {b}] contains no multiple of step {step}")
    return lo, hi


def window_of(interval, t_index: int, trace_len: int, step: float, clamp: bool = False):
    """Discretize ``[t + a, t + b]`` into sample indices.

    ``interval`` is ``None`` (to end of trace) or ``(a, b)`` with ``b`` None/inf
    for an unbounded upper end. Strict mode raises InsufficientTrace when the
    window passes the last sample; clamp mode truncates it.
    """
    if not 0 <= t_index < trace_len:
        raise IndexError(f"t_index {t_index} outside trace of length {trace_len}")
    lo_off, hi_off = window_offsets(interval, step)
    lo = t_index + lo_off
    hi = trace_len - 1 if hi_off is None else t_index + hi_off
    if hi >= trace_len or lo >= trace_len:
        if not clamp:
            raise InsufficientTrace(
                f"window [{lo}, {hi}] at t={t_index} exceeds trace length {trace_len}"
            )
        hi = min(hi, trace_len - 1)
    if lo > hi:
        raise EmptyWindow(f"window at t={t_index} is empty after clamping")
    return TimeIndexWindow(lo, hi)


# ---------------------------------------------------------------- CSV


def _format_value(kind, v):
    if isinstance(kind, BoolKind):
        return "1" if v else "0"
    if isinstance(kind, EnumKind):
        return v
    return repr(float(v))


def _parse_value(kind, text, where):
    text = text.strip()
    try:
        if isinstance(kind, BoolKind):
            if text.lower() in ("1", "true"):
                return True
            if text.lower() in ("0", "false"):
                return False
            raise ValueError(text)
        if isinstance(kind, EnumKind):
            if text not in kind.labels:
                raise ValueError(text)
            return text
        return float(text)
    except ValueError:
        raise ParseError(f"bad {kind} value {text!r} at {where}") from None


def _looks_numeric(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_trace_csv(path) -> Trace:
    """Read a trace: ``time`` column first, one column per signal.

    An optional second header row declares kinds (``real[lo,hi]``, ``bool``,
    ``enum{a,b}``); its ``time`` cell is ignored. Kind cells containing commas
    must be quoted.
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise EmptyTrace(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if not header or header[0] != "time":
        raise ParseError(f"{path}: first column must be 'time'", 1, 1)
    names = header[1:]
    if len(set(names)) != len(names):
        raise ParseError(f"{path}: duplicate signal names", 1, 1)
    body = rows[1:]
    kinds = {n: RealKind() for n in names}
    if body and not _looks_numeric(body[0][0]):
        decl = body.pop(0)
        if len(decl) != len(header):
            raise ParseError(f"{path}: kind row has {len(decl)} cells", 2, 1)
        kinds = {n: parse_kind(k) for n, k in zip(names, decl[1:])}
    if not body:
        raise EmptyTrace(f"{path}: no samples")

    times = []
    columns = {n: [] for n in names}
    first_data_line = len(rows) - len(body) + 1
    for r, row in enumerate(body):
        line = first_data_line + r
        if len(row) != len(header):
            raise ParseError(f"{path}: expected {len(header)} cells, got {len(row)}", line, 1)
        try:
            times.append(float(row[0]))
        except ValueError:
            raise ParseError(f"{path}: bad time {row[0]!r}", line, 1) from None
        for c, (n, cell) in enumerate(zip(names, row[1:]), start=2):
            columns[n].append(_parse_value(kinds[n], cell, f"line {line}, column {c}"))

    step = times[1] - times[0] if len(times) > 1 else 1.0
    if not step > 0:
        raise NonUniformSampling(f"{path}: time must increase")
    for i, t in enumerate(times):
        expected = times[0] + i * step
        if abs(t - expected) > GRID_RTOL * max(1.0, abs(t), abs(expected)):
            raise NonUniformSampling(f"{path}: sample {i} at time {t}, expected {expected}")
    try:
        return Trace({n: Signal(n, kinds[n], step, columns[n]) for n in names})
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


def write_trace_csv(trace: Trace, path, kinds_row: bool = True) -> None:
    names = trace.names()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time", *names])
        if kinds_row:
            w.writerow(["kind", *(str(trace[n].kind) for n in names)])
        for i in range(trace.length):
            w.writerow(
                [repr(i * trace.step)]
                + [_format_value(trace[n].kind, trace[n].samples[i]) for n in names]
            )


def trace_to_rows(trace: Trace, start: int = 0, stop: int | None = None) -> list[dict]:
    """JSON-friendly excerpt of a trace, one dict per sample."""
    out = []
    for i in range(start, trace.length if stop is None else min(stop, trace.length)):
        row = {"time": i * trace.step}
        for n, s in trace.signals.items():
            v = s.samples[i]
            row[n] = float(v) if isinstance(v, Fraction) else v
        out.append(row)
    return out
