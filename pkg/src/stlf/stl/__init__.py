"""Signal Temporal Logic: syntax, semantics and rewrites."""

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
    Interval,
    Not,
    Or,
    RealSignal,
    Top,
    Until,
)
from stlf.stl.boolean import boolean_sat
from stlf.stl.parser import parse_stl
from stlf.stl.patterns import (
    Fairness,
    Invariance,
    Responsiveness,
    Smoothness,
    SteadyState,
    build_pattern,
)
from stlf.stl.printer import format_formula, format_mu
from stlf.stl.reqfile import Requirement, load_requirements, parse_requirements
from stlf.stl.robustness import robustness, robustness_profile
from stlf.stl.transform import expand_bounded_eventually, is_core, shift, to_core
from stlf.stl.value import EPS, NEG_EPS, ZERO, RobustnessValue

__all__ = [
    "And", "BinOp", "Bottom", "BoolSignal", "Cmp", "Const", "Eventually", "Func",
    "Globally", "Implies", "Interval", "Not", "Or", "RealSignal", "Top", "Until",
    "boolean_sat", "parse_stl", "Fairness", "Invariance", "Responsiveness",
    "Smoothness", "SteadyState", "build_pattern", "format_formula", "format_mu",
    "Requirement", "load_requirements", "parse_requirements", "robustness",
    "robustness_profile", "expand_bounded_eventually", "is_core", "shift", "to_core",
    "EPS", "NEG_EPS", "ZERO", "RobustnessValue",
]
