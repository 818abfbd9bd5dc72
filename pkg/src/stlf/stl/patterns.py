"""Requirement patterns as formula templates.

========  ===============  ======================
name      parameters       formula
========  ===============  ======================
T1        phi              ``G phi``
T2        d, phi           ``F[0,d] G phi``
T3        psi, phi         ``G (psi -> G phi)``
T4        d, phi           ``F[0,d] phi``
T5        d, phi           ``G F[0,d] phi``
========  ===============  ======================
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from stlf.errors import MalformedInterval
from stlf.stl.ast import Eventually, Globally, Implies, Interval


def _check_d(d):
    if d is None or math.isnan(d) or d < 0 or d == math.inf:
        raise MalformedInterval(f"pattern bound must be finite and >= 0, got {d}")


@dataclass(frozen=True)
class Invariance:
    """T1: the property holds at every step."""


@dataclass(frozen=True)
class SteadyState:
    """T2: within ``d`` the property starts holding forever."""

    d: float

    def __post_init__(self):
        _check_d(self.d)


@dataclass(frozen=True)
class Smoothness:
    """T3: once the trigger holds, the property holds from then on."""


@dataclass(frozen=True)
class Responsiveness:
    """T4: the property holds at some point within ``d``."""

    d: float

    def __post_init__(self):
        _check_d(self.d)


@dataclass(frozen=True)
class Fairness:
    """T5: at every step the property recurs within ``d``."""

    d: float

    def __post_init__(self):
        _check_d(self.d)


PATTERNS = (Invariance, SteadyState, Smoothness, Responsiveness, Fairness)

_ARITY = dict(zip(PATTERNS, (1, 1, 2, 1, 1)))


def build_pattern(p, *subs):
    """Instantiate pattern ``p``; T3 takes ``(psi, phi)``, the others ``(phi,)``."""
    want = _ARITY.get(type(p))
    if want is None:
        raise TypeError(f"not a pattern: {p!r}")
    if len(subs) != want:
        raise TypeError(f"{type(p).__name__} takes {want} subformula(s), got {len(subs)}")
    if isinstance(p, Invariance):
        return Globally(None, subs[0])
    if isinstance(p, SteadyState):
        return Eventually(Interval(0.0, float(p.d)), Globally(None, subs[0]))
    if isinstance(p, Smoothness):
        psi, phi = subs
        return Globally(None, Implies(psi, Globally(None, phi)))
    if isinstance(p, Responsiveness):
        return Eventually(Interval(0.0, float(p.d)), subs[0])
    return Globally(None, Eventually(Interval(0.0, float(p.d)), subs[0]))
