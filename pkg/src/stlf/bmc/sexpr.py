"""Minimal S-expression reader for solver output."""

from __future__ import annotations

import re
from fractions import Fraction

from stlf.errors import SolverProtocolError

_TOKEN_RE = re.compile(r'\s*(?:(\()|(\))|("(?:[^"]|"")*")|(\|[^|]*\|)|([^\s()";|]+)|(;[^\n]*))')


def tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise SolverProtocolError(f"cannot read solver output near {text[pos:pos + 20]!r}")
        pos = m.end()
        if m.group(6) is None:
            tok = next(g for g in m.groups()[:5] if g is not None)
            out.append(tok[1:-1] if tok.startswith("|") else tok)
    return out


def parse_all(text: str) -> list:
    """Every top-level expression; lists for parenthesized forms, strings for atoms."""
    toks = tokenize(text)
    stack = [[]]
    for tok in toks:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise SolverProtocolError("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise SolverProtocolError("unbalanced '(' in solver output")
    return stack[0]


def to_value(sx):
    """Solver value term -> Fraction / int / bool."""
    if isinstance(sx, str):
        if sx == "true":
            return True
        if sx == "false":
            return False
        try:
            if re.fullmatch(r"\d+", sx):
                return int(sx)
            return Fraction(sx)
        except ValueError:
            raise SolverProtocolError(f"unexpected value {sx!r}") from None
    if len(sx) == 2 and sx[0] == "-":
        return -to_value(sx[1])
    if len(sx) == 3 and sx[0] == "/":
        return Fraction(to_value(sx[1])) / Fraction(to_value(sx[2]))
    raise SolverProtocolError(f"unsupported value term {sx!r}")


def parse_model_values(sx) -> dict:
    """``(get-model)`` result -> ``{symbol: value}`` for nullary definitions."""
    if sx and sx[0] == "model":  # older solvers prefix the list
        sx = sx[1:]
    out = {}
    for item in sx:
        if isinstance(item, list) and len(item) == 5 and item[0] == "define-fun" and item[2] == []:
            out[item[1]] = to_value(item[4])
    return out
