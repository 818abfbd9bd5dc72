"""Expression language of the model DSL.

Types are the strings ``"real"`` and ``"bool"`` or an :class:`EnumKind`.
Numbers are kept as exact fractions so that constants reach the SMT
encoding without rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

REAL = "real"
BOOL = "bool"

ARITH_OPS = ("+", "-", "*", "/")
ORDER_OPS = ("<", "<=", ">", ">=")
EQ_OPS = ("==", "!=")
LOGIC_OPS = ("&&", "||")

# builtin name -> arity (None: two or more arguments)
BUILTINS = {
    "sat": 3,
    "min": None,
    "max": None,
    "abs": 1,
    "sqrt": 1,
    "sin": 1,
    "cos": 1,
    "tan": 1,
    "exp": 1,
    "log": 1,
}
TRANSCENDENTAL = ("sin", "cos", "tan", "exp", "log")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Label:
    """An enum label; ``kind`` is the enum it belongs to."""

    name: str
    kind: object


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "!"
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


@dataclass(frozen=True)
class Ite:
    cond: object
    then: object
    other: object


def subexprs(e):
    if isinstance(e, Unary):
        return (e.arg,)
    if isinstance(e, Bin):
        return (e.left, e.right)
    if isinstance(e, Call):
        return e.args
    if isinstance(e, Ite):
        return (e.cond, e.then, e.other)
    return ()


def walk_expr(e):
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(subexprs(node)))


def free_vars(e) -> set[str]:
    return {n.name for n in walk_expr(e) if isinstance(n, Var)}


def is_nonlinear(e) -> bool:
    """True when ``e`` multiplies or divides two non-constant terms, or uses sqrt."""
    for node in walk_expr(e):
        if isinstance(node, Call) and node.fn == "sqrt":
            return True
        if isinstance(node, Bin) and node.op == "*":
            if not (_is_const(node.left) or _is_const(node.right)):
                return True
        if isinstance(node, Bin) and node.op == "/" and not _is_const(node.right):
            return True
    return False


def _is_const(e):
    return not any(isinstance(n, Var) for n in walk_expr(e))


def format_expr(e) -> str:
    if isinstance(e, Num):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, (Var, Label)):
        return e.name
    if isinstance(e, Unary):
        return f"{e.op}{format_expr(e.arg)}"
    if isinstance(e, Bin):
        return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
    if isinstance(e, Call):
        return f"{e.fn}({', '.join(format_expr(a) for a in e.args)})"
    if isinstance(e, Ite):
        return (
            f"(if {format_expr(e.cond)} then {format_expr(e.then)} "
            f"else {format_expr(e.other)})"
        )
    raise TypeError(f"not an expression: {e!r}")
