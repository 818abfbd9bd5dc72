"""Simulation of model IR.

Models are compiled once into a Python function that runs the whole horizon
with local variables; the tree interpreter in :mod:`stlf.models.ir` is kept
for initial values and as a cross-check in tests. ``exact=True`` evaluates
with fractions, which is how solver counterexamples are replayed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from stlf.errors import RangeViolation
from stlf.models import runtime
from stlf.models.expr import Bin, BoolLit, Call, Ite, Label, Num, Unary, Var
from stlf.models.ir import ModelIR, eval_expr
from stlf.signals import BoolKind, RealKind, Signal, Trace

# ------------------------------------------------------------ inputs


@dataclass(frozen=True)
class Constant:
    value: object

    def at(self, i, nsteps):
        return self.value

    def values(self):
        return (self.value,)

    def to_json(self):
        return _json_value(self.value)


@dataclass(frozen=True)
class PiecewiseConstant:
    """Equal-length segments over the horizon; ``values[j]`` holds on segment ``j``."""

    segments: tuple

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a piecewise-constant input needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def count(self):
        return len(self.segments)

    def at(self, i, nsteps):
        k = len(self.segments)
        return self.segments[min(i * k // max(nsteps, 1), k - 1)]

    def values(self):
        return self.segments

    def to_json(self):
        return [_json_value(v) for v in self.segments]


def _json_value(v):
    if isinstance(v, Fraction):
        return float(v)
    return v


@dataclass(frozen=True)
class InputAssignment:
    """Value source for every model input."""

    values: tuple  # (name, Constant | PiecewiseConstant), sorted by name

    def __init__(self, values):
        items = values.items() if hasattr(values, "items") else values
        norm = []
        for name, v in items:
            if not isinstance(v, (Constant, PiecewiseConstant)):
                v = PiecewiseConstant(tuple(v)) if isinstance(v, (list, tuple)) else Constant(v)
            norm.append((name, v))
        object.__setattr__(self, "values", tuple(sorted(norm, key=lambda p: p[0])))

    def __getitem__(self, name):
        return dict(self.values)[name]

    def names(self):
        return [n for n, _ in self.values]

    def sequence(self, name, nsteps):
        src = self[name]
        return [src.at(i, nsteps) for i in range(nsteps + 1)]

    def to_json(self):
        return {n: v.to_json() for n, v in self.values}

    @classmethod
    def from_json(cls, d):
        return cls({n: PiecewiseConstant(tuple(v)) if isinstance(v, list) else Constant(v)
                    for n, v in d.items()})


@dataclass(frozen=True)
class SimConfig:
    nsteps: int = 40

    def __post_init__(self):
        if self.nsteps < 1:
            raise ValueError("nsteps must be >= 1")


def check_assignment(model: ModelIR, assignment: InputAssignment):
    """Raise unless ``assignment`` covers every input with in-range values."""
    names = set(assignment.names())
    for decl in model.inputs:
        if decl.name not in names:
            raise ValueError(f"no value for input {decl.name!r}")
        for v in assignment[decl.name].values():
            if not decl.kind.contains(v):
                raise RangeViolation(f"input {decl.name}={v!r} outside {decl.kind}")
    extra = names - {d.name for d in model.inputs}
    if extra:
        raise ValueError(f"unknown inputs {sorted(extra)}")


# ------------------------------------------------------------ codegen


_OPS = {"+": "+", "-": "-", "*": "*", "==": "==", "!=": "!=", "<": "<", "<=": "<=",
        ">": ">", ">=": ">="}


class _Gen:
    def __init__(self, exact):
        self.exact = exact
        self.consts = []

    def const(self, value):
        self.consts.append(value)
        return f"_K[{len(self.consts) - 1}]"

    def expr(self, e):
        if isinstance(e, Num):
            v = e.value
            if self.exact:
                return self.const(v)
            return repr(float(v))
        if isinstance(e, BoolLit):
            return "True" if e.value else "False"
        if isinstance(e, Label):
            return repr(e.name)
        if isinstance(e, Var):
            return f"v_{e.name}"
        if isinstance(e, Unary):
            if e.op == "-":
                return f"(-{self.expr(e.arg)})"
            return f"(not {self.expr(e.arg)})"
        if isinstance(e, Bin):
            a, b = self.expr(e.left), self.expr(e.right)
            if e.op == "/":
                return f"_div({a}, {b})"
            if e.op == "&&":
                return f"({a} and {b})"
            if e.op == "||":
                return f"({a} or {b})"
            return f"({a} {_OPS[e.op]} {b})"
        if isinstance(e, Call):
            args = ", ".join(self.expr(a) for a in e.args)
            return f"_f_{e.fn}({args})"
        if isinstance(e, Ite):
            return f"({self.expr(e.then)} if {self.expr(e.cond)} else {self.expr(e.other)})"
        raise TypeError(f"not an expression: {e!r}")


def _compile(model: ModelIR, exact: bool):
    """Build ``run(U, nsteps)`` returning ``{signal: samples}``."""
    g = _Gen(exact)
    ins = [d.name for d in model.inputs]
    sts = [s.name for s in model.states]
    outs = [o.name for o in model.outputs]
    lines = ["def run(U, S0, nsteps):"]
    for n in ins:
        lines.append(f"    u_{n} = U[{n!r}]")
    for n in ins + sts + outs:
        lines.append(f"    c_{n} = []")
    for n in sts:
        lines.append(f"    v_{n} = S0[{n!r}]")
    lines.append("    for i in range(nsteps + 1):")
    for n in ins:
        lines.append(f"        v_{n} = u_{n}[i]")
    for o in model.outputs:
        lines.append(f"        v_{o.name} = {g.expr(o.expr)}")
    for n in ins + sts + outs:
        lines.append(f"        c_{n}.append(v_{n})")
    if sts:
        lines.append("        if i < nsteps:")
        nexts = [g.expr(e) for _, e in model.updates]
        targets = ", ".join(f"v_{n}" for n in sts)
        lines.append(f"            {targets}, = ({', '.join(nexts)},)")
    lines.append("    return {" + ", ".join(f"{n!r}: c_{n}" for n in ins + sts + outs) + "}")
    src = "\n".join(lines) + "\n"
    env = {"_K": g.consts, "_div": runtime.div}
    env.update({f"_f_{k}": f for k, f in runtime.FUNCS.items()})
    exec(compile(src, f"<model {model.name}>", "exec"), env)
    return env["run"], src


def compiled(model: ModelIR, exact=False):
    key = ("run", exact)
    if key not in model._cache:
        model._cache[key] = _compile(model, exact)[0]
    return model._cache[key]


def model_source(model: ModelIR, exact=False) -> str:
    """Generated Python source, for debugging."""
    return _compile(model, exact)[1]


# ------------------------------------------------------------ simulate


def _coerce(v, kind, exact):
    if isinstance(kind, RealKind):
        if isinstance(v, bool):
            raise TypeError(f"expected a real value, got {v!r}")
        return Fraction(v) if exact else float(v)
    if isinstance(kind, BoolKind):
        return bool(v)
    return v


def initial_state(model: ModelIR, inputs0: dict, exact=False) -> dict:
    """State values at sample 0 given the sample-0 inputs."""
    env = dict(inputs0)
    return {s.name: _coerce(eval_expr(s.init, env, exact), s.kind, exact) for s in model.states}


def step_state(model: ModelIR, state: dict, inputs: dict, exact=False):
    """One sample: returns ``(recorded values, next state)``."""
    env = dict(inputs)
    env.update(state)
    for o in model.outputs:
        env[o.name] = eval_expr(o.expr, env, exact)
    nxt = {n: eval_expr(e, env, exact) for n, e in model.updates}
    return env, nxt


def simulate(model: ModelIR, assignment: InputAssignment, cfg: SimConfig, exact=False) -> Trace:
    """Run the model for ``cfg.nsteps`` steps; the trace has ``nsteps + 1`` samples."""
    check_assignment(model, assignment)
    n = cfg.nsteps
    U = {
        d.name: [_coerce(v, d.kind, exact) for v in assignment.sequence(d.name, n)]
        for d in model.inputs
    }
    S0 = initial_state(model, {k: col[0] for k, col in U.items()}, exact)
    cols = compiled(model, exact)(U, S0, n)
    for s in model.states:
        k = s.kind
        if isinstance(k, RealKind) and k.bounded:
            for i, v in enumerate(cols[s.name]):
                if not k.contains(v):
                    raise RangeViolation(f"state {s.name}={v} leaves {k} at step {i}")
    step = float(model.step)
    kinds = model.kinds()
    return Trace({name: Signal(name, kinds[name], step, col) for name, col in cols.items()})


__all__ = [
    "Constant",
    "PiecewiseConstant",
    "InputAssignment",
    "SimConfig",
    "simulate",
    "initial_state",
    "step_state",
    "check_assignment",
    "compiled",
    "model_source",
]
