"""Requirement files: one formula per line.

::

    # comments start with '#'
    R1: G(h1 >= 8 -> sensor1H = 1)
    G(abs(out) <= 3)          # unnamed lines are called R<line index>

Each formula may be prefixed with ``NAME:``; pattern shorthands such as
``T5(3, x >= 0)`` are accepted like in :func:`parse_stl`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from stlf.errors import ParseError
from stlf.stl.parser import parse_stl
from stlf.stl.printer import format_formula
from stlf.stl.transform import to_core

_NAME_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:")


@dataclass(frozen=True)
class Requirement:
    name: str
    text: str
    formula: object  # surface AST

    @property
    def core(self):
        return to_core(self.formula)

    def __str__(self):
        return f"{self.name}: {self.text}"


def _strip_comment(line):
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_requirements(text: str) -> list[Requirement]:
    reqs = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        start = 0
        m = _NAME_RE.match(line)
        name = None
        if m:
            name = m.group(1)
            start = m.end()
        body = line[start:]
        try:
            formula = parse_stl(body)
        except ParseError as exc:
            col = None if exc.column is None else exc.column + start
            raise type(exc)(exc.message, lineno, col) from None
        if name is None:
            name = f"R{len(reqs) + 1}"
        if name in seen:
            raise ParseError(f"duplicate requirement name {name!r}", lineno, 1)
        seen.add(name)
        reqs.append(Requirement(name, body.strip(), formula))
    return reqs


def load_requirements(path) -> list[Requirement]:
    return parse_requirements(Path(path).read_text())


def format_requirements(reqs) -> str:
    return "".join(f"{r.name}: {format_formula(r.formula)}\n" for r in reqs)
