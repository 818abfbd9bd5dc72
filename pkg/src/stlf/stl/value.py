"""Robustness values with an exact infinitesimal.

A value is a pair ``(real, eps)`` standing for ``real + eps * ε`` where ``ε``
is a positive infinitesimal. Tuple ordering is already lexicographic, which
is exactly the order induced by ``ε``; ``min``/``max`` therefore work as-is.
"""

from __future__ import annotations

from typing import NamedTuple


class RobustnessValue(NamedTuple):
    real: float
    eps: int = 0

    def __neg__(self):
        return RobustnessValue(-self.real, -self.eps)

    def satisfied(self) -> bool:
        return self >= ZERO

    def to_json(self):
        return {"real": float(self.real) + 0.0, "eps": self.eps}

    @classmethod
    def from_json(cls, d):
        return cls(d["real"], d["eps"])

    def __str__(self):
        real = float(self.real) + 0.0  # drop the sign of -0.0
        if self.eps == 0:
            return f"{real:g}"
        sign = "+" if self.eps > 0 else "-"
        mag = abs(self.eps)
        eps = "ε" if mag == 1 else f"{mag}ε"
        return f"{real:g}{sign}{eps}"


ZERO = RobustnessValue(0, 0)
EPS = RobustnessValue(0, 1)
NEG_EPS = RobustnessValue(0, -1)
