"""Render formulas back into the concrete syntax accepted by ``parse_stl``."""

from stlf.stl.ast import (
    And,
    BinOp,
    Bottom,
    BoolSignal,
    Cmp,
    Const,
    Eventually,
    Func,
    Globally,
    Implies,
    Not,
    Or,
    RealSignal,
    Top,
    Until,
)


def _num(x):
    return repr(float(x))


def _interval(iv):
    if iv is None:
        return ""
    hi = "inf" if iv.hi is None else _num(iv.hi)
    return f"[{_num(iv.lo)},{hi}]"


def _ref(name, offset):
    return f"{name}@{offset}" if offset else name


def format_mu(mu) -> str:
    if isinstance(mu, Const):
        return _num(mu.value)
    if isinstance(mu, RealSignal):
        return _ref(mu.name, mu.offset)
    if isinstance(mu, BinOp):
        return f"({format_mu(mu.left)} {mu.op} {format_mu(mu.right)})"
    if isinstance(mu, Func):
        return f"{mu.fn}({format_mu(mu.arg)})"
    raise TypeError(f"not a mu expression: {mu!r}")


def format_formula(f) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, BoolSignal):
        return ("!" if f.negated else "") + _ref(f.name, f.offset)
    if isinstance(f, Cmp):
        return f"{format_mu(f.mu)} {f.rel} 0"
    if isinstance(f, Or):
        return f"({format_formula(f.left)} || {format_formula(f.right)})"
    if isinstance(f, And):
        return f"({format_formula(f.left)} && {format_formula(f.right)})"
    if isinstance(f, Implies):
        return f"({format_formula(f.left)} -> {format_formula(f.right)})"
    if isinstance(f, Not):
        return f"!({format_formula(f.arg)})"
    if isinstance(f, Until):
        return f"({format_formula(f.left)} U{_interval(f.interval)} {format_formula(f.right)})"
    if isinstance(f, Globally):
        return f"G{_interval(f.interval)}({format_formula(f.arg)})"
    if isinstance(f, Eventually):
        return f"F{_interval(f.interval)}({format_formula(f.arg)})"
    raise TypeError(f"not a formula: {f!r}")
