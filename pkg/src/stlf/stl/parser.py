"""Concrete syntax for STL requirements.

Examples::

    G[0,10](x >= 0)
    G(h >= s -> v = 1)
    F[0,5] G (abs(out - ref) <= 0.01)
    (x > 0) U[0,2] (y >= 1)
    T5(3, x >= 0)            # pattern shorthand, see stlf.stl.patterns

Comparisons accept any arithmetic on both sides; the right-hand side is
moved into the left so every atom compares against zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from stlf.errors import FormulaSyntaxError, MalformedInterval, UnknownFunction
from stlf.stl.ast import (
    FUNCTIONS,
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

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|=>|&&|\|\||>=|<=|==|!=|[-+*/()\[\],<>=!@])
""",
    re.X,
)

_RELOPS = {">=": ">=", ">": ">", "<": "<", "<=": "<=", "=": "=", "==": "=", "!=": "!="}
_KEYWORDS = {"G", "F", "U", "true", "false", "inf"}
_PATTERNS = {"T1", "T2", "T3", "T4", "T5"}


@dataclass
class Token:
    kind: str  # num | ident | op | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        else:
            for i, ch in enumerate(m.group()):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def mu_binop(op, left, right):
    """Build ``left op right`` folding constant operands."""
    if isinstance(left, Const) and isinstance(right, Const):
        a, b = left.value, right.value
        if op == "+":
            return Const(a + b)
        if op == "-":
            return Const(a - b)
        if op == "*":
            return Const(a * b)
        if op == "/" and b != 0:
            return Const(a / b)
    return BinOp(op, left, right)


def make_cmp(lhs, rel, rhs):
    """Normalize ``lhs rel rhs`` into ``mu rel 0``."""
    if isinstance(rhs, Const) and rhs.value == 0:
        return Cmp(lhs, rel)
    return Cmp(mu_binop("-", lhs, rhs), rel)


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token helpers
    @property
    def tok(self):
        return self.tokens[self.pos]

    def peek(self, k=1):
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def error(self, msg, tok=None, cls=FormulaSyntaxError):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return cls(f"{msg}, found {found!r}", tok.line, tok.col)

    def accept(self, *texts):
        if self.tok.kind in ("op", "ident") and self.tok.text in texts:
            tok = self.tok
            self.pos += 1
            return tok
        return None

    def expect(self, text):
        tok = self.accept(text)
        if tok is None:
            raise self.error(f"expected {text!r}")
        return tok

    def number(self):
        neg = bool(self.accept("-"))
        if self.tok.kind != "num":
            raise self.error("expected a number")
        value = float(self.tok.text)
        self.pos += 1
        return -value if neg else value

    # -- formulas
    def parse(self):
        f = self.implies()
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")
        return f

    def implies(self):
        left = self.disjunction()
        if self.accept("->", "=>"):
            return Implies(left, self.implies())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.accept("||"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.until()
        while self.accept("&&"):
            left = And(left, self.until())
        return left

    def until(self):
        left = self.unary()
        while self.tok.kind == "ident" and self.tok.text == "U":
            self.pos += 1
            interval = self.interval_opt()
            left = Until(interval, left, self.unary())
        return left

    def unary(self):
        if self.accept("!"):
            return Not(self.unary())
        if self.tok.kind == "ident" and self.tok.text in ("G", "F"):
            op = self.tok.text
            self.pos += 1
            interval = self.interval_opt()
            arg = self.unary()
            return Globally(interval, arg) if op == "G" else Eventually(interval, arg)
        return self.atom()

    def interval_opt(self):
        if self.tok.text != "[":
            return None
        start = self.expect("[")
        lo = self.number()
        self.expect(",")
        if self.accept("inf"):
            hi = None
        else:
            hi = self.number()
        self.expect("]")
        try:
            return Interval.make(lo, hi)
        except MalformedInterval as exc:
            raise MalformedInterval(str(exc), start.line, start.col) from None

    def atom(self):
        tok = self.tok
        if self.accept("true"):
            return Top()
        if self.accept("false"):
            return Bottom()
        if tok.kind == "ident" and tok.text in _PATTERNS and self.peek().text == "(":
            return self.pattern()
        cmp = self.try_comparison()
        if cmp is not None:
            return cmp
        if self.accept("("):
            f = self.implies()
            self.expect(")")
            return f
        if tok.kind == "ident" and tok.text not in _KEYWORDS:
            self.pos += 1
            return BoolSignal(tok.text, offset=self.offset_opt())
        raise self.error("expected a formula")

    def try_comparison(self):
        start = self.pos
        try:
            lhs = self.arith()
        except UnknownFunction:
            raise
        except FormulaSyntaxError:
            self.pos = start
            return None
        op = self.tok.text if self.tok.kind == "op" else None
        if op not in _RELOPS:
            self.pos = start
            return None
        self.pos += 1
        rhs = self.arith()
        return make_cmp(lhs, _RELOPS[op], rhs)

    def pattern(self):
        from stlf.stl import patterns as pt

        name = self.tok.text
        self.pos += 1
        self.expect("(")
        if name == "T1":
            p, subs = pt.Invariance(), (self.implies(),)
        elif name == "T3":
            psi = self.implies()
            self.expect(",")
            p, subs = pt.Smoothness(), (psi, self.implies())
        else:
            tok = self.tok
            d = self.number()
            self.expect(",")
            cls = {"T2": pt.SteadyState, "T4": pt.Responsiveness, "T5": pt.Fairness}[name]
            try:
                p = cls(d)
            except MalformedInterval as exc:
                raise MalformedInterval(str(exc), tok.line, tok.col) from None
            subs = (self.implies(),)
        self.expect(")")
        return pt.build_pattern(p, *subs)

    # -- arithmetic
    def arith(self):
        left = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.tok.text
            self.pos += 1
            left = mu_binop(op, left, self.term())
        return left

    def term(self):
        left = self.factor()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.tok.text
            self.pos += 1
            left = mu_binop(op, left, self.factor())
        return left

    def factor(self):
        tok = self.tok
        if self.accept("-"):
            arg = self.factor()
            if isinstance(arg, Const):
                return Const(-arg.value)
            return BinOp("-", Const(0.0), arg)
        if self.accept("+"):
            return self.factor()
        if tok.kind == "num":
            self.pos += 1
            return Const(float(tok.text))
        if self.accept("("):
            e = self.arith()
            self.expect(")")
            return e
        if tok.kind == "ident" and tok.text not in _KEYWORDS:
            self.pos += 1
            if self.tok.text == "(":
                if tok.text not in FUNCTIONS:
                    raise UnknownFunction(
                        f"unknown function {tok.text!r}", tok.line, tok.col
                    )
                self.pos += 1
                arg = self.arith()
                self.expect(")")
                return Func(tok.text, arg)
            return RealSignal(tok.text, self.offset_opt())
        raise self.error("expected an arithmetic expression")

    def offset_opt(self):
        if not self.accept("@"):
            return 0
        self.accept("+")
        if self.tok.kind != "num" or not self.tok.text.isdigit():
            raise self.error("expected a sample offset")
        value = int(self.tok.text)
        self.pos += 1
        return value


def parse_stl(text: str):
    """Parse one formula in concrete syntax into a (surface) AST."""
    return _Parser(text).parse()
