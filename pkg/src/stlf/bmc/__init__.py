"""Bounded model checking and k-induction through an external SMT solver."""

from stlf.bmc.emit import encode, unroll
from stlf.bmc.engine import (
    BmcConfig,
    BoundedSafe,
    Falsified,
    Inconclusive,
    Proven,
    bmc_check,
    check,
    k_induction_check,
    replay,
)
from stlf.bmc.prop import SafetyProperty
from stlf.bmc.solver import run_query, solver_command

__all__ = [
    "encode",
    "unroll",
    "BmcConfig",
    "BoundedSafe",
    "Falsified",
    "Inconclusive",
    "Proven",
    "bmc_check",
    "check",
    "k_induction_check",
    "replay",
    "SafetyProperty",
    "run_query",
    "solver_command",
]
