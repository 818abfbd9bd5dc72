"""STL abstract syntax.

Formulas are immutable dataclasses, so structural equality and hashing come
for free. ``Not`` and ``Implies`` only appear in surface syntax;
:func:`stlf.stl.transform.to_core` removes them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

from stlf.errors import MalformedInterval

RELATIONS = (">=", ">", "<", "<=", "=", "!=")
MATH_OPS = ("+", "-", "*", "/")
FUNCTIONS = ("abs", "sqrt", "sin", "cos", "tan", "exp", "log")


class Interval(NamedTuple):
    lo: float
    hi: float | None  # None: unbounded above

    @classmethod
    def make(cls, lo, hi=None):
        if hi == math.inf:
            hi = None
        if lo < 0 or (hi is not None and lo > hi) or math.isnan(lo):
            raise MalformedInterval(f"bad interval [{lo}, {hi}]")
        return cls(lo, hi)


# ------------------------------------------------------------------ mu


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class RealSignal:
    name: str
    offset: int = 0  # sample shift, produced by F-expansion


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "MuExpr"
    right: "MuExpr"


@dataclass(frozen=True)
class Func:
    fn: str
    arg: "MuExpr"


MuExpr = Union[Const, RealSignal, BinOp, Func]


# ------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class BoolSignal:
    name: str
    negated: bool = False
    offset: int = 0


@dataclass(frozen=True)
class Cmp:
    """``mu rel 0``."""

    mu: MuExpr
    rel: str


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Until:
    interval: Interval | None
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Eventually:
    interval: Interval | None
    arg: "Formula"


@dataclass(frozen=True)
class Globally:
    interval: Interval | None
    arg: "Formula"


Formula = Union[
    Top, Bottom, BoolSignal, Cmp, Or, And, Not, Implies, Until, Eventually, Globally
]

TEMPORAL = (Until, Eventually, Globally)


def children(f):
    if isinstance(f, (Or, And, Implies)):
        return (f.left, f.right)
    if isinstance(f, Until):
        return (f.left, f.right)
    if isinstance(f, (Not, Eventually, Globally)):
        return (f.arg,)
    return ()


def walk(f):
    """Pre-order iteration over formula nodes."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def is_temporal_free(f) -> bool:
    return not any(isinstance(n, TEMPORAL) for n in walk(f))


def mu_signals(mu):
    if isinstance(mu, RealSignal):
        yield mu
    elif isinstance(mu, BinOp):
        yield from mu_signals(mu.left)
        yield from mu_signals(mu.right)
    elif isinstance(mu, Func):
        yield from mu_signals(mu.arg)


def signal_names(f) -> set[str]:
    names = set()
    for node in walk(f):
        if isinstance(node, BoolSignal):
            names.add(node.name)
        elif isinstance(node, Cmp):
            names.update(s.name for s in mu_signals(node.mu))
    return names


def max_offset(f) -> int:
    """Largest sample shift carried by any atom of ``f``."""
    best = 0
    for node in walk(f):
        if isinstance(node, BoolSignal):
            best = max(best, node.offset)
        elif isinstance(node, Cmp):
            best = max([best, *(s.offset for s in mu_signals(node.mu))])
    return best


def conjoin(*fs):
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disjoin(*fs):
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out
