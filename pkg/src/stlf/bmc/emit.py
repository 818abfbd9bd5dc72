"""SMT-LIB 2 encoding of unrolled models.

Every model variable gets one constant per step, named ``name@step``.
Reals map to ``Real``, booleans to ``Bool`` and enums to ``Int`` with a
range assertion. ``min``, ``max``, ``abs`` and ``sat`` become small
``define-fun`` helpers written with ``ite``; ``sqrt`` becomes a fresh
nonnegative constant whose square is the argument. Trigonometric,
exponential and logarithmic functions have no encoding.

The output only depends on its arguments, so scripts can be compared
byte for byte.
"""

from __future__ import annotations

from fractions import Fraction

from stlf.errors import UnboundSignal, UnsupportedTheory
from stlf.models.expr import (
    TRANSCENDENTAL,
    Bin,
    BoolLit,
    Call,
    Ite,
    Label,
    Num,
    Unary,
    Var,
    walk_expr,
)
from stlf.signals import BoolKind, EnumKind, RealKind
from stlf.stl import ast as stl

_HELPERS = {
    "min_": "(define-fun min_ ((a Real) (b Real)) Real (ite (<= a b) a b))",
    "max_": "(define-fun max_ ((a Real) (b Real)) Real (ite (>= a b) a b))",
    "abs_": "(define-fun abs_ ((a Real)) Real (ite (>= a 0.0) a (- a)))",
    "sat_": "(define-fun sat_ ((x Real) (lo Real) (hi Real)) Real (min_ (max_ x lo) hi))",
}
_HELPER_ORDER = ("min_", "max_", "abs_", "sat_")
_REL = {">=": ">=", ">": ">", "<=": "<=", "<": "<", "=": "="}


def real_literal(q) -> str:
    """Exact SMT-LIB literal of a rational (floats go through their shortest repr)."""
    if isinstance(q, float):
        q = Fraction(repr(q))
    q = Fraction(q)
    neg = q < 0
    q = abs(q)
    if q.denominator == 1:
        text = f"{q.numerator}.0"
    else:
        text = f"(/ {q.numerator}.0 {q.denominator}.0)"
    return f"(- {text})" if neg else text


def sym(name, i) -> str:
    return f"{name}@{i}"


class Encoder:
    """Collects declarations and assertions for one script."""

    def __init__(self, model):
        self.model = model
        self.kinds = model.kinds()
        self.helpers = set()
        self.aux = []  # (name, declaration and assertion lines)
        self.uses_int = any(isinstance(k, EnumKind) for k in self.kinds.values())
        self.nonlinear = model.is_nonlinear()
        if model.uses(*TRANSCENDENTAL):
            fns = sorted(
                {n.fn for e in model.expressions() for n in walk_expr(e) if isinstance(n, Call)}
                & set(TRANSCENDENTAL)
            )
            raise UnsupportedTheory(
                f"model {model.name!r} uses {', '.join(fns)}, which SMT arithmetic cannot express"
            )

    # -- model expressions
    def expr(self, e, i) -> str:
        if isinstance(e, Num):
            return real_literal(e.value)
        if isinstance(e, BoolLit):
            return "true" if e.value else "false"
        if isinstance(e, Label):
            return str(e.kind.index(e.name))
        if isinstance(e, Var):
            return sym(e.name, i)
        if isinstance(e, Unary):
            if e.op == "-":
                return f"(- {self.expr(e.arg, i)})"
            return f"(not {self.expr(e.arg, i)})"
        if isinstance(e, Bin):
            a, b = self.expr(e.left, i), self.expr(e.right, i)
            op = e.op
            if op == "&&":
                return f"(and {a} {b})"
            if op == "||":
                return f"(or {a} {b})"
            if op == "==":
                return f"(= {a} {b})"
            if op == "!=":
                return f"(not (= {a} {b}))"
            return f"({op} {a} {b})"
        if isinstance(e, Call):
            args = [self.expr(a, i) for a in e.args]
            return self.call(e.fn, args, i)
        if isinstance(e, Ite):
            return f"(ite {self.expr(e.cond, i)} {self.expr(e.then, i)} {self.expr(e.other, i)})"
        raise TypeError(f"not an expression: {e!r}")

    def call(self, fn, args, i):
        if fn in ("min", "max"):
            self.helpers.add(fn + "_")
            out = args[0]
            for a in args[1:]:
                out = f"({fn}_ {out} {a})"
            return out
        if fn == "abs":
            self.helpers.add("abs_")
            return f"(abs_ {args[0]})"
        if fn == "sat":
            self.helpers.update(("min_", "max_", "sat_"))
            return f"(sat_ {args[0]} {args[1]} {args[2]})"
        if fn == "sqrt":
            name = f"sqrt!{len(self.aux)}@{i}"
            self.aux.append(
                (
                    name,
                    [
                        f"(declare-fun {name} () Real)",
                        f"(assert (and (>= {name} 0.0) (= (* {name} {name}) {args[0]})))",
                    ],
                )
            )
            self.nonlinear = True
            return name
        raise UnsupportedTheory(f"{fn} cannot be expressed in SMT arithmetic")

    # -- property atoms
    def mu(self, mu, i) -> str:
        if isinstance(mu, stl.Const):
            return real_literal(mu.value)
        if isinstance(mu, stl.RealSignal):
            kind = self._kind(mu.name)
            s = sym(mu.name, i + mu.offset)
            if isinstance(kind, BoolKind):
                return f"(ite {s} 1.0 0.0)"
            if isinstance(kind, EnumKind):
                return f"(to_real {s})"
            return s
        if isinstance(mu, stl.BinOp):
            if mu.op in ("*", "/") and not (
                isinstance(mu.left, stl.Const) or isinstance(mu.right, stl.Const)
            ):
                self.nonlinear = True
            return f"({mu.op} {self.mu(mu.left, i)} {self.mu(mu.right, i)})"
        if isinstance(mu, stl.Func):
            return self.call(mu.fn, [self.mu(mu.arg, i)], i)
        raise TypeError(f"not a mu expression: {mu!r}")

    def formula(self, f, i) -> str:
        if isinstance(f, stl.Top):
            return "true"
        if isinstance(f, stl.Bottom):
            return "false"
        if isinstance(f, stl.BoolSignal):
            if not isinstance(self._kind(f.name), BoolKind):
                raise UnboundSignal(f"signal {f.name!r} is used as boolean but is not")
            s = sym(f.name, i + f.offset)
            return f"(not {s})" if f.negated else s
        if isinstance(f, stl.Cmp):
            m = self.mu(f.mu, i)
            if f.rel == "!=":
                return f"(not (= {m} 0.0))"
            return f"({_REL[f.rel]} {m} 0.0)"
        if isinstance(f, stl.Or):
            return f"(or {self.formula(f.left, i)} {self.formula(f.right, i)})"
        if isinstance(f, stl.And):
            return f"(and {self.formula(f.left, i)} {self.formula(f.right, i)})"
        raise TypeError(f"unexpected node in a safety property body: {type(f).__name__}")

    def _kind(self, name):
        if name not in self.kinds:
            raise UnboundSignal(f"signal {name!r} is not a variable of model {self.model.name!r}")
        return self.kinds[name]

    # -- per-step constraints
    def declarations(self, i) -> list:
        out = []
        for name, kind in self.kinds.items():
            sort = "Bool" if isinstance(kind, BoolKind) else "Int" if isinstance(kind, EnumKind) else "Real"
            out.append(f"(declare-fun {sym(name, i)} () {sort})")
        return out

    def domain(self, i) -> list:
        out = []
        for d in self.model.inputs:
            k = d.kind
            s = sym(d.name, i)
            if isinstance(k, RealKind):
                out.append(f"(assert (and (<= {real_literal(k.lo)} {s}) (<= {s} {real_literal(k.hi)})))")
        for name, k in self.kinds.items():
            if isinstance(k, EnumKind):
                s = sym(name, i)
                out.append(f"(assert (and (<= 0 {s}) (<= {s} {len(k.labels) - 1})))")
        return out

    def outputs(self, i) -> list:
        return [f"(assert (= {sym(o.name, i)} {self.expr(o.expr, i)}))" for o in self.model.outputs]

    def init(self) -> list:
        return [f"(assert (= {sym(s.name, 0)} {self.expr(s.init, 0)}))" for s in self.model.states]

    def transition(self, i) -> list:
        return [
            f"(assert (= {sym(n, i + 1)} {self.expr(e, i)}))" for n, e in self.model.updates
        ]

    def logic(self) -> str:
        nl = self.nonlinear
        if self.uses_int:
            return "QF_NIRA" if nl else "QF_LIRA"
        return "QF_NRA" if nl else "QF_LRA"


def encode(model, prop, k: int, mode: str = "bmc") -> str:
    """Script for one query over steps ``0..k``.

    ``bmc``: from the initial state, some step in ``0..k`` violates ``prop``.
    ``step``: from an arbitrary state, ``prop`` holds at ``0..k-1`` and fails at ``k``
    (the step case of k-induction; atoms may read ahead past ``k``).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if mode not in ("bmc", "step"):
        raise ValueError(f"unknown mode {mode!r}")
    enc = Encoder(model)
    horizon = k + prop.lookahead if mode == "step" else k
    body = []
    for i in range(horizon + 1):
        body.append(f"; step {i}")
        body.extend(enc.domain(i))
        body.extend(enc.outputs(i))
        if i < horizon:
            body.extend(enc.transition(i))
    if mode == "bmc":
        init = enc.init()
        viol = [f"(not {enc.formula(prop.body, i)})" for i in prop.checked_steps(k)]
        goal = _disjunction(viol)
    else:
        init = []
        assumed = [enc.formula(prop.body, i) for i in range(k) if prop.applies_at(i)]
        goal_parts = []
        if assumed:
            goal_parts.append(_conjunction(assumed))
        goal_parts.append(
            f"(not {enc.formula(prop.body, k)})" if prop.applies_at(k) else "false"
        )
        goal = _conjunction(goal_parts)
    lines = [
        f"; model {model.name}, {mode} query, k={k}",
        "(set-option :produce-models true)",
        f"(set-logic {enc.logic()})",
    ]
    lines.extend(_HELPERS[h] for h in _HELPER_ORDER if h in enc.helpers)
    for i in range(horizon + 1):
        lines.extend(enc.declarations(i))
    for _, aux in enc.aux:
        lines.extend(aux)
    if init:
        lines.append("; initial state")
        lines.extend(init)
    lines.extend(body)
    lines.append("; property")
    lines.append(f"(assert {goal})")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


def _disjunction(parts):
    if not parts:
        return "false"
    return parts[0] if len(parts) == 1 else f"(or {' '.join(parts)})"


def _conjunction(parts):
    if not parts:
        return "true"
    return parts[0] if len(parts) == 1 else f"(and {' '.join(parts)})"


def unroll(model, prop, k: int) -> str:
    """Bounded model checking script: can ``prop`` fail within ``k`` steps?"""
    return encode(model, prop, k, "bmc")

