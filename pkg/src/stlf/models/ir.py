"""Discrete-time model representation.

At every sample ``i`` a model reads its inputs, computes outputs from the
inputs and the current state, records all of them, and then computes the
next state. Updates see only values of the current sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from stlf.models import runtime
from stlf.models.expr import (
    BOOL,
    REAL,
    Bin,
    BoolLit,
    Call,
    Ite,
    Label,
    Num,
    Unary,
    Var,
    is_nonlinear,
    walk_expr,
)
from stlf.signals import BoolKind, RealKind


@dataclass(frozen=True)
class VarDecl:
    name: str
    kind: object  # RealKind | BoolKind | EnumKind

    def __post_init__(self):
        k = self.kind
        if isinstance(k, RealKind) and k.bounded and not k.lo < k.hi:
            raise ValueError(f"{self.name}: empty range [{k.lo}, {k.hi}]")


@dataclass(frozen=True)
class StateDecl:
    name: str
    kind: object
    init: object  # expression over inputs and constants


@dataclass(frozen=True)
class OutputDecl:
    name: str
    kind: object
    expr: object


def type_of_kind(kind):
    if isinstance(kind, RealKind):
        return REAL
    if isinstance(kind, BoolKind):
        return BOOL
    return kind


def kind_of_type(t):
    if t == REAL:
        return RealKind()
    if t == BOOL:
        return BoolKind()
    return t


@dataclass(frozen=True)
class ModelIR:
    name: str
    step: Fraction
    inputs: tuple  # VarDecl
    states: tuple  # StateDecl
    outputs: tuple  # OutputDecl, in evaluation order
    updates: tuple  # (state name, expression), in state order
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_cache"] = {}
        return state

    @property
    def step_float(self) -> float:
        return float(self.step)

    def update_of(self, state_name):
        return dict(self.updates)[state_name]

    def input(self, name) -> VarDecl:
        for d in self.inputs:
            if d.name == name:
                return d
        raise KeyError(name)

    def kinds(self) -> dict:
        """Declared kind of every recorded signal."""
        out = {d.name: d.kind for d in self.inputs}
        out.update({s.name: s.kind for s in self.states})
        out.update({o.name: o.kind for o in self.outputs})
        return out

    def expressions(self):
        yield from (s.init for s in self.states)
        yield from (o.expr for o in self.outputs)
        yield from (e for _, e in self.updates)

    def uses(self, *fns) -> bool:
        return any(
            isinstance(n, Call) and n.fn in fns
            for e in self.expressions()
            for n in walk_expr(e)
        )

    def is_nonlinear(self) -> bool:
        return any(is_nonlinear(e) for e in self.expressions())


def eval_expr(e, env, exact=False):
    """Tree-walking evaluation; ``env`` maps variable names to values."""
    if isinstance(e, Num):
        return e.value if exact else float(e.value)
    if isinstance(e, BoolLit):
        return e.value
    if isinstance(e, Label):
        return e.name
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Unary):
        v = eval_expr(e.arg, env, exact)
        return -v if e.op == "-" else not v
    if isinstance(e, Bin):
        op = e.op
        if op == "&&":
            a = eval_expr(e.left, env, exact)
            return bool(a and eval_expr(e.right, env, exact))
        if op == "||":
            a = eval_expr(e.left, env, exact)
            return bool(a or eval_expr(e.right, env, exact))
        a = eval_expr(e.left, env, exact)
        b = eval_expr(e.right, env, exact)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return runtime.div(a, b)
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        raise ValueError(f"unknown operator {op!r}")
    if isinstance(e, Call):
        return runtime.FUNCS[e.fn](*(eval_expr(a, env, exact) for a in e.args))
    if isinstance(e, Ite):
        if eval_expr(e.cond, env, exact):
            return eval_expr(e.then, env, exact)
        return eval_expr(e.other, env, exact)
    raise TypeError(f"not an expression: {e!r}")

