"""Classical (true/false) semantics, evaluated by direct recursion.

Both operands of every connective are always evaluated, so a failing atom
raises here exactly when it would make the robustness evaluation fail.
"""

from __future__ import annotations

from stlf.signals import window_of
from stlf.stl.ast import (
    And,
    Bottom,
    BoolSignal,
    Cmp,
    Eventually,
    Globally,
    Implies,
    Not,
    Or,
    Top,
    Until,
)
from stlf.stl.mu import check_bound, mu_value, numeric_columns, read_sample

_COMPARE = {
    ">=": lambda v: v >= 0,
    ">": lambda v: v > 0,
    "<=": lambda v: v <= 0,
    "<": lambda v: v < 0,
    "=": lambda v: v == 0,
    "!=": lambda v: v != 0,
}


def boolean_sat(formula, trace, t_index: int = 0, clamp: bool = False) -> bool:
    """Whether ``trace`` satisfies the core ``formula`` at ``t_index``."""
    if not 0 <= t_index < len(trace):
        raise IndexError(f"t_index {t_index} outside trace of length {len(trace)}")
    check_bound(formula, trace)
    columns = numeric_columns(trace)
    n, step = len(trace), trace.step

    def sat(f, t):
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        if isinstance(f, BoolSignal):
            v = read_sample(trace[f.name].samples, f.name, t + f.offset, clamp)
            return bool(v) != f.negated
        if isinstance(f, Cmp):
            return _COMPARE[f.rel](mu_value(f.mu, columns, t, clamp))
        if isinstance(f, Or):
            a, b = sat(f.left, t), sat(f.right, t)
            return a or b
        if isinstance(f, And):
            a, b = sat(f.left, t), sat(f.right, t)
            return a and b
        if isinstance(f, Globally):
            w = window_of(f.interval, t, n, step, clamp)
            return all([sat(f.arg, j) for j in w.indices()])
        if isinstance(f, Eventually):
            w = window_of(f.interval, t, n, step, clamp)
            return any([sat(f.arg, j) for j in w.indices()])
        if isinstance(f, Until):
            w = window_of(f.interval, t, n, step, clamp)
            holds = False
            for j in w.indices():
                right = sat(f.right, j)
                left = all([sat(f.left, i) for i in range(t, j + 1)])
                holds = holds or (right and left)
            return holds
        if isinstance(f, (Not, Implies)):
            raise ValueError("formula is not in core form; apply to_core first")
        raise TypeError(f"not a formula: {f!r}")

    return sat(formula, t_index)
