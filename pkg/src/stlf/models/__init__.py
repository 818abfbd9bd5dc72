"""Discrete-time models: IR, textual format, simulation and the built-in catalog."""

from stlf.models.dsl import load_model, parse_model
from stlf.models.ir import ModelIR, OutputDecl, StateDecl, VarDecl
from stlf.models.sim import (
    Constant,
    InputAssignment,
    PiecewiseConstant,
    SimConfig,
    initial_state,
    simulate,
    step_state,
)

__all__ = [
    "load_model",
    "parse_model",
    "ModelIR",
    "OutputDecl",
    "StateDecl",
    "VarDecl",
    "Constant",
    "InputAssignment",
    "PiecewiseConstant",
    "SimConfig",
    "initial_state",
    "simulate",
    "step_state",
]
