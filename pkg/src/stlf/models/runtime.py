"""Value-level semantics of the model expression language.

Shared by the tree interpreter and the compiled simulator so both agree on
domain errors and saturation.
"""

from __future__ import annotations

import math
from fractions import Fraction

from stlf.errors import DomainError


def div(a, b):
    if b == 0:
        raise DomainError(f"division by zero ({a} / {b})")
    return a / b


def sat(x, lo, hi):
    return min(max(x, lo), hi)


def vmin(*xs):
    return min(xs)


def vmax(*xs):
    return max(xs)


def sqrt(x):
    if x < 0:
        raise DomainError(f"sqrt of negative value {x}")
    if isinstance(x, Fraction):
        # exact when the fraction is a perfect square
        n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if n * n == x.numerator and d * d == x.denominator:
            return Fraction(n, d)
    return math.sqrt(x)


def log(x):
    if x <= 0:
        raise DomainError(f"log of non-positive value {x}")
    return math.log(x)


def _guard(fn, name):
    def wrapped(x):
        try:
            return fn(x)
        except (OverflowError, ValueError) as exc:
            raise DomainError(f"{name}({x}): {exc}") from None

    return wrapped


exp = _guard(math.exp, "exp")
sin = _guard(math.sin, "sin")
cos = _guard(math.cos, "cos")
tan = _guard(math.tan, "tan")

FUNCS = {
    "sat": sat,
    "min": vmin,
    "max": vmax,
    "abs": abs,
    "sqrt": sqrt,
    "log": log,
    "exp": exp,
    "sin": sin,
    "cos": cos,
    "tan": tan,
}
