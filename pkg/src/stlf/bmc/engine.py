"""Bounded model checking, k-induction and their combination.

Verdicts, strongest first:

* :class:`Proven` - k-induction closed the proof at some depth.
* :class:`Falsified` - a counterexample was found and replayed by simulation.
* :class:`BoundedSafe` - no violation in executions of up to ``k_max`` steps.
* :class:`Inconclusive` - the solver failed, timed out or no depth sufficed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from stlf.bmc.emit import encode, sym
from stlf.bmc.solver import run_query
from stlf.errors import SolverProtocolError, SolverUnavailable, StlfError
from stlf.models.sim import InputAssignment, PiecewiseConstant, SimConfig, simulate
from stlf.signals import BoolKind, EnumKind, RealKind, trace_to_rows
from stlf.stl.boolean import boolean_sat


@dataclass(frozen=True)
class BmcConfig:
    k_max: int = 10
    induction_depth_max: int = 10
    solver_cmd: object = None  # str or argv list; None: $STLF_SOLVER or z3
    timeout_per_query: float | None = 10.0

    def __post_init__(self):
        if self.k_max < 1 or self.induction_depth_max < 1:
            raise ValueError("k_max and induction_depth_max must be >= 1")


@dataclass(frozen=True)
class Proven:
    depth: int
    method: str = "k-induction"
    name = "Proven"

    def to_json(self):
        return {"verdict": self.name, "method": self.method, "depth": self.depth}


@dataclass(frozen=True)
class Falsified:
    step: int  # first violating step of the replayed trace
    k: int  # unrolling depth of the satisfiable query
    inputs: InputAssignment  # one segment per step
    trace: object = field(compare=False)  # replayed Trace
    method: str = "bmc"
    name = "Falsified"

    def to_json(self):
        return {
            "verdict": self.name,
            "method": self.method,
            "step": self.step,
            "k": self.k,
            "inputs": self.inputs.to_json(),
            "trace": trace_to_rows(self.trace),
        }


@dataclass(frozen=True)
class BoundedSafe:
    k: int
    name = "BoundedSafe"

    def to_json(self):
        return {"verdict": self.name, "k": self.k}


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    name = "Inconclusive"

    def to_json(self):
        return {"verdict": self.name, "reason": self.reason}


_RANK = {"Proven": 0, "Falsified": 1, "BoundedSafe": 2, "Inconclusive": 3}


def _decode_value(kind, v):
    if isinstance(kind, BoolKind):
        return bool(v)
    if isinstance(kind, EnumKind):
        return kind.labels[int(v)]
    return Fraction(v)


def _default_value(kind):
    if isinstance(kind, RealKind):
        return Fraction(kind.lo) if kind.bounded else Fraction(0)
    if isinstance(kind, BoolKind):
        return False
    return kind.labels[0]


def replay(model, prop, values: dict, k: int, method: str):
    """Rebuild inputs from a solver model over steps ``0..k`` and re-simulate them exactly.

    Returns :class:`Falsified` when the simulated trace violates ``prop``,
    otherwise :class:`Inconclusive` explaining the mismatch.
    """
    seqs = {}
    for d in model.inputs:
        seq = []
        for i in range(k + 1):
            s = sym(d.name, i)
            seq.append(_decode_value(d.kind, values[s]) if s in values else _default_value(d.kind))
        seqs[d.name] = PiecewiseConstant(tuple(seq))
    inputs = InputAssignment(seqs)
    nsteps = max(k, 1)
    try:
        trace = simulate(model, inputs, SimConfig(nsteps), exact=True)
        for i in prop.checked_steps(k):
            if not boolean_sat(prop.body, trace, i):
                return Falsified(i, k, inputs, trace, method)
    except StlfError as exc:
        return Inconclusive(f"counterexample replay failed: {type(exc).__name__}: {exc}")
    return Inconclusive("solver counterexample does not violate the property in simulation")


def _ask(script, cfg):
    """Solver status and values, or an Inconclusive verdict on failure."""
    try:
        ans = run_query(script, cfg.solver_cmd, cfg.timeout_per_query)
    except (SolverUnavailable, SolverProtocolError) as exc:
        return None, Inconclusive(f"{type(exc).__name__}: {exc}")
    if ans.status in ("sat", "unsat"):
        return ans, None
    return None, Inconclusive(f"solver answered {ans.status}")


def bmc_check(model, prop, cfg: BmcConfig) -> object:
    """Look for a violation in executions of 1, 2, ..., ``k_max`` steps."""
    for k in range(1, cfg.k_max + 1):
        if not prop.checked_steps(k):
            continue
        ans, bad = _ask(encode(model, prop, k, "bmc"), cfg)
        if bad:
            return Inconclusive(f"{bad.reason} (bmc, k={k})")
        if ans.status == "sat":
            return replay(model, prop, ans.values, k, "bmc")
    return BoundedSafe(cfg.k_max)


def k_induction_check(model, prop, cfg: BmcConfig) -> object:
    """Simple k-induction: base case from the initial state plus an unstrengthened step case."""
    look = prop.lookahead
    for k in range(1, cfg.induction_depth_max + 1):
        base_k = k - 1 + look
        if prop.checked_steps(base_k):
            ans, bad = _ask(encode(model, prop, base_k, "bmc"), cfg)
            if bad:
                return Inconclusive(f"{bad.reason} (base case, k={k})")
            if ans.status == "sat":
                return replay(model, prop, ans.values, base_k, "k-induction base case")
        ans, bad = _ask(encode(model, prop, k, "step"), cfg)
        if bad:
            return Inconclusive(f"{bad.reason} (step case, k={k})")
        if ans.status == "unsat":
            return Proven(k)
    return Inconclusive(f"not {cfg.induction_depth_max}-inductive")


def check(model, prop, cfg: BmcConfig) -> object:
    """Run k-induction and BMC side by side and keep the strongest verdict."""
    with ThreadPoolExecutor(max_workers=2) as pool:
        ind = pool.submit(k_induction_check, model, prop, cfg)
        bmc = pool.submit(bmc_check, model, prop, cfg)
        verdicts = [ind.result(), bmc.result()]
    return min(verdicts, key=lambda v: _RANK[v.name])
