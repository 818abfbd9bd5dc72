"""Arithmetic on signal values inside atomic predicates."""

from __future__ import annotations

import math

from stlf.errors import DomainError, InsufficientTrace, UnboundSignal
from stlf.signals import BoolKind
from stlf.stl.ast import BinOp, BoolSignal, Cmp, Const, Func, RealSignal, mu_signals, walk


def apply_op(op, a, b):
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise DomainError(f"division by zero ({a} / {b})")
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def apply_func(fn, x):
    if fn == "abs":
        return abs(x)
    if fn == "sqrt":
        if x < 0:
            raise DomainError(f"sqrt of negative value {x}")
        return math.sqrt(x)
    if fn == "log":
        if x <= 0:
            raise DomainError(f"log of non-positive value {x}")
        return math.log(x)
    try:
        if fn == "exp":
            return math.exp(x)
        if fn == "sin":
            return math.sin(x)
        if fn == "cos":
            return math.cos(x)
        if fn == "tan":
            return math.tan(x)
    except (OverflowError, ValueError) as exc:
        raise DomainError(f"{fn}({x}): {exc}") from None
    raise ValueError(f"unknown function {fn!r}")


def numeric_columns(trace):
    """Signal name -> list of numbers (bools as 0/1, enums as label index)."""
    return {name: trace[name].numeric() for name in trace.names()}


def read_sample(column, name, index, clamp):
    n = len(column)
    if index >= n:
        if not clamp:
            raise InsufficientTrace(f"{name}@{index} is past the trace end ({n} samples)")
        index = n - 1
    return column[index]


def mu_value(mu, columns, t, clamp=False):
    """Evaluate ``mu`` at sample ``t``; ``columns`` comes from :func:`numeric_columns`."""
    if isinstance(mu, Const):
        return mu.value
    if isinstance(mu, RealSignal):
        if mu.name not in columns:
            raise UnboundSignal(f"signal {mu.name!r} is not in the trace")
        return read_sample(columns[mu.name], mu.name, t + mu.offset, clamp)
    if isinstance(mu, BinOp):
        a = mu_value(mu.left, columns, t, clamp)
        b = mu_value(mu.right, columns, t, clamp)
        return apply_op(mu.op, a, b)
    if isinstance(mu, Func):
        return apply_func(mu.fn, mu_value(mu.arg, columns, t, clamp))
    raise TypeError(f"not a mu expression: {mu!r}")


def check_bound(formula, trace):
    """Raise UnboundSignal unless every signal of ``formula`` exists with a usable kind."""
    for node in walk(formula):
        if isinstance(node, BoolSignal):
            if node.name not in trace:
                raise UnboundSignal(f"signal {node.name!r} is not in the trace")
            if not isinstance(trace[node.name].kind, BoolKind):
                raise UnboundSignal(f"signal {node.name!r} is used as boolean but is not")
        elif isinstance(node, Cmp):
            for s in mu_signals(node.mu):
                if s.name not in trace:
                    raise UnboundSignal(f"signal {s.name!r} is not in the trace")
