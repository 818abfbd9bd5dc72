"""Rewrites: negation normal form and bounded-eventually expansion."""

from __future__ import annotations

from stlf.errors import NestedTemporal, UnboundedInterval, UnsupportedNegation
from stlf.signals import window_offsets
from stlf.stl.ast import (
    And,
    BinOp,
    Bottom,
    BoolSignal,
    Cmp,
    Eventually,
    Func,
    Globally,
    Implies,
    Not,
    Or,
    RealSignal,
    Top,
    Until,
    disjoin,
    is_temporal_free,
    walk,
)

NEGATED_REL = {">=": "<", "<": ">=", ">": "<=", "<=": ">", "=": "!=", "!=": "="}


def to_core(f):
    """Eliminate ``Not`` and ``Implies``, pushing negation down to the atoms."""
    if isinstance(f, Not):
        return _negate(f.arg)
    if isinstance(f, Implies):
        return Or(_negate(f.left), to_core(f.right))
    if isinstance(f, Or):
        return Or(to_core(f.left), to_core(f.right))
    if isinstance(f, And):
        return And(to_core(f.left), to_core(f.right))
    if isinstance(f, Until):
        return Until(f.interval, to_core(f.left), to_core(f.right))
    if isinstance(f, Eventually):
        return Eventually(f.interval, to_core(f.arg))
    if isinstance(f, Globally):
        return Globally(f.interval, to_core(f.arg))
    return f


def _negate(f):
    if isinstance(f, Top):
        return Bottom()
    if isinstance(f, Bottom):
        return Top()
    if isinstance(f, BoolSignal):
        return BoolSignal(f.name, not f.negated, f.offset)
    if isinstance(f, Cmp):
        return Cmp(f.mu, NEGATED_REL[f.rel])
    if isinstance(f, Not):
        return to_core(f.arg)
    if isinstance(f, Implies):
        return And(to_core(f.left), _negate(f.right))
    if isinstance(f, Or):
        return And(_negate(f.left), _negate(f.right))
    if isinstance(f, And):
        return Or(_negate(f.left), _negate(f.right))
    if isinstance(f, Globally):
        return Eventually(f.interval, _negate(f.arg))
    if isinstance(f, Eventually):
        return Globally(f.interval, _negate(f.arg))
    if isinstance(f, Until):
        raise UnsupportedNegation("negated Until has no core form (no Release operator)")
    raise TypeError(f"not a formula: {f!r}")


def is_core(f) -> bool:
    return not any(isinstance(n, (Not, Implies)) for n in walk(f))


def _shift_mu(mu, k):
    if isinstance(mu, RealSignal):
        return RealSignal(mu.name, mu.offset + k)
    if isinstance(mu, BinOp):
        return BinOp(mu.op, _shift_mu(mu.left, k), _shift_mu(mu.right, k))
    if isinstance(mu, Func):
        return Func(mu.fn, _shift_mu(mu.arg, k))
    return mu


def shift(f, k: int):
    """Move every atom of a temporal-free formula ``k`` samples forward."""
    if k == 0:
        return f
    if isinstance(f, BoolSignal):
        return BoolSignal(f.name, f.negated, f.offset + k)
    if isinstance(f, Cmp):
        return Cmp(_shift_mu(f.mu, k), f.rel)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(shift(f.arg, k))
    if isinstance(f, (Or, And, Implies)):
        return type(f)(shift(f.left, k), shift(f.right, k))
    raise NestedTemporal("cannot shift a temporal operator")


def expand_bounded_eventually(f, step: float):
    """Replace each bounded ``F[a,b] phi`` by a disjunction of shifted copies of ``phi``.

    ``phi`` must be temporal-free. Other operators are rebuilt around the
    rewritten operands, so ``G F[0,d] phi`` becomes ``G (phi@0 || ... || phi@n)``.
    """
    if isinstance(f, Eventually):
        if f.interval is None or f.interval.hi is None:
            raise UnboundedInterval("only bounded eventually can be expanded")
        if not is_temporal_free(f.arg):
            raise NestedTemporal("eventually operand contains a temporal operator")
        lo, hi = window_offsets(f.interval, step)
        return disjoin(*(shift(f.arg, k) for k in range(lo, hi + 1)))
    if isinstance(f, Globally):
        return Globally(f.interval, expand_bounded_eventually(f.arg, step))
    if isinstance(f, Until):
        return Until(
            f.interval,
            expand_bounded_eventually(f.left, step),
            expand_bounded_eventually(f.right, step),
        )
    if isinstance(f, Not):
        return Not(expand_bounded_eventually(f.arg, step))
    if isinstance(f, (Or, And, Implies)):
        return type(f)(
            expand_bounded_eventually(f.left, step),
            expand_bounded_eventually(f.right, step),
        )
    return f
