import itertools
import os
import random
import sys
from fractions import Fraction
from functools import lru_cache

import pytest

from conftest import COUNTER, GOLDEN, needs_solver
from stlf.bmc import (
    BmcConfig,
    BoundedSafe,
    Falsified,
    Inconclusive,
    Proven,
    SafetyProperty,
    bmc_check,
    check,
    encode,
    k_induction_check,
    run_query,
    solver_command,
    unroll,
)
from stlf.bmc.emit import real_literal
from stlf.bmc.sexpr import parse_all, parse_model_values, to_value
from stlf.errors import (
    PropertyNotSafety,
    SolverProtocolError,
    SolverUnavailable,
    UnboundSignal,
    UnsupportedTheory,
)
from stlf.falsify import SearchSpace
from stlf.models import InputAssignment, SimConfig, initial_state, parse_model, simulate, step_state
from stlf.models.catalog import builtin_models
from stlf.signals import Trace
from stlf.stl import ZERO, boolean_sat, parse_stl, robustness

CATALOG = builtin_models()
COUNTER_MODEL = parse_model(COUNTER)

# Never decreases once it leaves 0, but it never leaves 0: G(x <= 100) holds on
# every reachable state without being k-inductive for any k.
STUCK = parse_model("model stuck; state x init 0; x' = if x >= 1 then x + 1 else 0;")


def prop(model, text):
    return SafetyProperty.from_formula(parse_stl(text), model.step_float)


GOLDEN_CASES = {
    "counter_le3_bmc_k2": (lambda: COUNTER_MODEL, "G(x <= 3)", 2, "bmc"),
    "counter_le3_bmc_k4": (lambda: COUNTER_MODEL, "G(x <= 3)", 4, "bmc"),
    "counter_ge0_step_k1": (lambda: COUNTER_MODEL, "G(x >= 0)", 1, "step"),
    "counter_lookahead_bmc_k3": (lambda: COUNTER_MODEL, "G[1,5](F[0,1] o >= 2)", 3, "bmc"),
    "tustin_fault_r1_bmc_k2": (
        lambda: CATALOG["tustin_lite"].fault("loose_saturation").model,
        "G(abs(out) <= 3)", 2, "bmc",
    ),
    "triplex_r2_bmc_k1": (
        lambda: CATALOG["triplex_lite"].model,
        "G((abs(a - b) > 1 && abs(a - c) > 1) -> out = (b + c) / 2)", 1, "bmc",
    ),
}


class TestEmitter:
    @pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
    def test_golden(self, name):
        get_model, text, k, mode = GOLDEN_CASES[name]
        m = get_model()
        script = encode(m, prop(m, text), k, mode)
        path = GOLDEN / f"{name}.smt2"
        if os.environ.get("STLF_REGEN_GOLDEN"):
            path.write_text(script)
        assert script == path.read_text()

    def test_stable(self):
        p = prop(COUNTER_MODEL, "G(x <= 3)")
        assert unroll(COUNTER_MODEL, p, 3) == unroll(COUNTER_MODEL, p, 3)

    def test_shape(self):
        s = unroll(COUNTER_MODEL, prop(COUNTER_MODEL, "G(x <= 3)"), 2)
        assert s.count("(declare-fun x@") == 3
        assert "(assert (= x@0 0.0))" in s
        assert s.rstrip().endswith("(check-sat)\n(get-model)")

    def test_logic(self):
        assert "(set-logic QF_LIRA)" in (GOLDEN / "triplex_r2_bmc_k1.smt2").read_text()
        m = parse_model("input a: real[0,1]; state x init 0; x' = x * a;")
        assert "(set-logic QF_NRA)" in unroll(m, prop(m, "G(x <= 1)"), 1)

    def test_literals(self):
        assert real_literal(Fraction(-3, 4)) == "(- (/ 3.0 4.0))"
        assert real_literal(0.1) == "(/ 1.0 10.0)"
        assert real_literal(2) == "2.0"

    def test_trig_rejected(self):
        m = parse_model("input a: real[0,1]; output o = sin(a);")
        with pytest.raises(UnsupportedTheory):
            unroll(m, prop(m, "G(o <= 1)"), 1)

    @pytest.mark.parametrize("text", ["F[0,3] x > 1", "G(x > 0) && G(x < 5)", "G(F(x > 1))", "G(x > 0 U x > 1)"])
    def test_not_safety(self, text):
        with pytest.raises(PropertyNotSafety):
            prop(COUNTER_MODEL, text)

    def test_unknown_signal(self):
        with pytest.raises(UnboundSignal):
            unroll(COUNTER_MODEL, prop(COUNTER_MODEL, "G(y > 0)"), 1)

    def test_property_window(self):
        p = prop(COUNTER_MODEL, "G[2,4](F[0,1] x > 1)")
        assert (p.first, p.last, p.lookahead) == (2, 4, 1)
        assert list(p.checked_steps(4)) == [2, 3]
        assert list(p.checked_steps(9)) == [2, 3, 4]

    def test_sqrt_auxiliary(self):
        m = parse_model("input a: real[0,4]; output o = sqrt(a);")
        s = unroll(m, prop(m, "G(o <= 2)"), 0)
        assert "(declare-fun sqrt!0@0 () Real)" in s
        assert "(set-logic QF_NRA)" in s


class TestSexpr:
    def test_model(self):
        out = """(
          (define-fun x@1 () Real (- 2.5))
          (define-fun b@0 () Bool true)
          (define-fun m@0 () Int 2)
          (define-fun y@0 () Real (/ 1.0 3.0))
          (define-fun f ((a Real)) Real a)
        )"""
        vals = parse_model_values(parse_all(out)[0])
        assert vals == {"x@1": Fraction(-5, 2), "b@0": True, "m@0": 2, "y@0": Fraction(1, 3)}

    def test_unbalanced(self):
        with pytest.raises(SolverProtocolError):
            parse_all("((define-fun x () Real 1.0)")

    def test_bad_value(self):
        with pytest.raises(SolverProtocolError):
            to_value(["root-obj", "x", "1"])


class TestSolverProcess:
    def test_command(self, monkeypatch):
        monkeypatch.setenv("STLF_SOLVER", "cvc5 --lang smt2")
        assert solver_command() == ["cvc5", "--lang", "smt2"]
        assert solver_command("z3 -in -T:5") == ["z3", "-in", "-T:5"]

    def test_missing_binary(self):
        with pytest.raises(SolverUnavailable):
            run_query("(check-sat)", "no-such-solver-binary")

    def test_bmc_missing_binary(self, counter):
        v = bmc_check(counter, prop(counter, "G(x <= 3)"), BmcConfig(solver_cmd="no-such-solver-binary"))
        assert isinstance(v, Inconclusive)
        assert v.reason.startswith("SolverUnavailable")

    @pytest.mark.parametrize("output", ["", "garbage", "(error \"bad\")"])
    def test_protocol_errors(self, output):
        cmd = [sys.executable, "-c", f"import sys; sys.stdin.read(); print({output!r})"]
        with pytest.raises(SolverProtocolError):
            run_query("(check-sat)", cmd)

    def test_unknown_is_inconclusive(self, counter):
        cmd = [sys.executable, "-c", "import sys; sys.stdin.read(); print('unknown')"]
        v = check(counter, prop(counter, "G(x >= 0)"), BmcConfig(solver_cmd=cmd))
        assert isinstance(v, Inconclusive)

    def test_timeout(self):
        cmd = [sys.executable, "-c", "import time; time.sleep(5)"]
        assert run_query("(check-sat)", cmd, timeout=0.2).status == "timeout"


@needs_solver
class TestCounter:
    def test_unroll_k2_unsat(self, counter):
        assert run_query(unroll(counter, prop(counter, "G(x <= 3)"), 2)).status == "unsat"

    def test_unroll_k4_sat(self, counter):
        ans = run_query(unroll(counter, prop(counter, "G(x <= 3)"), 4))
        assert ans.status == "sat"
        assert ans.values["x@4"] == 4

    def test_bmc_falsified(self, counter):
        v = bmc_check(counter, prop(counter, "G(x <= 3)"), BmcConfig())
        assert isinstance(v, Falsified)
        assert (v.step, v.k) == (4, 4)
        assert v.trace["x"].samples[4] == 4

    def test_bmc_bounded(self, counter):
        assert bmc_check(counter, prop(counter, "G(x >= 0)"), BmcConfig()) == BoundedSafe(10)

    def test_induction_proves(self, counter):
        assert k_induction_check(counter, prop(counter, "G(x >= 0)"), BmcConfig()) == Proven(1)

    def test_induction_base_case(self, counter):
        v = k_induction_check(counter, prop(counter, "G(x <= 3)"), BmcConfig())
        assert isinstance(v, Falsified)
        assert v.step == 4
        assert v.method == "k-induction base case"

    def test_check(self, counter):
        assert check(counter, prop(counter, "G(x >= 0)"), BmcConfig()) == Proven(1)
        v = check(counter, prop(counter, "G(x <= 3)"), BmcConfig())
        assert isinstance(v, Falsified) and v.step == 4

    def test_lookahead(self, counter):
        # x reaches 2 at step 2, so "within one step x >= 2" first fails at step 0
        v = check(counter, prop(counter, "G(F[0,1] x >= 2)"), BmcConfig())
        assert isinstance(v, Falsified) and v.step == 0
        v = check(counter, prop(counter, "G[2,8](F[0,1] x >= 2)"), BmcConfig())
        assert v == Proven(1)

    def test_not_inductive(self):
        p = prop(STUCK, "G(x <= 100)")
        cfg = BmcConfig(k_max=8, induction_depth_max=4)
        assert k_induction_check(STUCK, p, cfg) == Inconclusive("not 4-inductive")
        assert check(STUCK, p, cfg) == BoundedSafe(8)
        tr = simulate(STUCK, InputAssignment({}), SimConfig(200))
        assert set(tr["x"].samples) == {0}

    def test_needs_two_steps(self):
        # y trails x by one step, so y <= x needs the previous step as well
        m = parse_model("state x init 0; state y init 0; x' = x + 1; y' = x;")
        assert check(m, prop(m, "G(y <= x && x <= y + 1)"), BmcConfig()) == Proven(1)
        assert check(m, prop(m, "G(y <= x)"), BmcConfig()) == Proven(1)


@lru_cache(maxsize=None)
def catalog_verdict(model_name, variant, req_name, k_max=20):
    entry = CATALOG[model_name]
    m = entry.model if variant == "healthy" else entry.fault(variant).model
    req = entry.requirement(req_name)
    return check(m, SafetyProperty.from_formula(req.formula, m.step_float), BmcConfig(k_max=k_max)), m, req


CHECKABLE = [
    (name, variant, r.name)
    for name, entry in CATALOG.items()
    if not entry.model.uses("sin", "cos", "tan", "exp", "log")
    for variant in ["healthy"] + [f.name for f in entry.faults]
    for r in entry.requirements
]


@needs_solver
class TestCatalog:
    @pytest.mark.parametrize("case", CHECKABLE, ids="/".join)
    def test_verdict_matches_fault(self, case):
        name, variant, req_name = case
        v, m, req = catalog_verdict(*case)
        entry = CATALOG[name]
        faulty = variant != "healthy" and entry.fault(variant).violates == req_name
        if faulty:
            assert isinstance(v, Falsified)
            replayed = robustness(SafetyProperty.from_formula(req.formula, m.step_float).as_formula(v.k, m.step_float), v.trace)
            assert replayed < ZERO
        else:
            assert isinstance(v, Proven)

    def test_unsupported(self):
        entry = CATALOG["euler_lite"]
        r = entry.requirements[0]
        with pytest.raises(UnsupportedTheory):
            check(entry.model, SafetyProperty.from_formula(r.formula, 1.0), BmcConfig())

    @pytest.mark.parametrize("name", sorted({c[0] for c in CHECKABLE}))
    def test_proven_survive_random_simulation(self, name):
        entry = CATALOG[name]
        rng = random.Random(7)
        for variant in ["healthy"] + [f.name for f in entry.faults]:
            proven = [
                entry.requirement(r.name)
                for r in entry.requirements
                if isinstance(catalog_verdict(name, variant, r.name)[0], Proven)
            ]
            m = catalog_verdict(name, variant, entry.requirements[0].name)[1]
            space = SearchSpace.from_model(m, segments=4)
            for _ in range(1000):
                tr = simulate(m, space.decode(space.random_point(rng)), entry.sim_config)
                for r in proven:
                    assert boolean_sat(r.core, tr)


# Input grids for the brute-force comparison with the solver. Each grid holds
# the extreme values that drive the first violation of the seeded faults.
BMC_GRIDS = {
    "two_tanks_lite": {"qin": [0.0, 1.0], "demand": [0.0, 1.0]},
    "tustin_lite": {"u": [-1.0, 1.0], "reset": [False, True], "ic": [-2.0, 2.0]},
    "triplex_lite": {"a": [0.0, 1.5, 3.0], "b": [0.0, 1.5, 3.0], "c": [0.0, 1.5, 3.0]},
}


def first_grid_violation(model, p, grid, k_max):
    """Earliest step at which some grid input sequence violates ``p`` (None if none)."""
    names = sorted(grid)
    combos = [
        {n: v if isinstance(v, bool) else Fraction(v) for n, v in zip(names, vals)}
        for vals in itertools.product(*(grid[n] for n in names))
    ]
    kinds = model.kinds()
    starts = [(initial_state(model, c, exact=True), c) for c in combos]
    for i in range(k_max + 1):
        reached = {}
        for state, inputs in starts:
            env, nxt = step_state(model, state, inputs, exact=True)
            if p.applies_at(i):
                tr = Trace.from_columns(model.step_float, {n: [env[n]] for n in kinds}, kinds)
                if not boolean_sat(p.body, tr):
                    return i
            reached[tuple(sorted(nxt.items()))] = nxt
        starts = [(s, c) for s in reached.values() for c in combos]
    return None


@needs_solver
class TestUnrollSoundness:
    @pytest.mark.parametrize("name", sorted(BMC_GRIDS))
    def test_matches_grid(self, name):
        entry = CATALOG[name]
        for variant, m in [("healthy", entry.model)] + [(f.name, f.model) for f in entry.faults]:
            for r in entry.requirements:
                p = SafetyProperty.from_formula(r.formula, m.step_float)
                first = first_grid_violation(m, p, BMC_GRIDS[name], 6)
                for k in range(7):
                    status = run_query(unroll(m, p, k)).status
                    expected = "sat" if first is not None and first <= k else "unsat"
                    assert status == expected, (variant, r.name, k)
