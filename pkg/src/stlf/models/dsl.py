"""Textual model format.

Example::

    model tank;
    step 0.5;
    const CAP = 100;
    input h: real[0,10];
    state x: real[0,CAP] init 0;
    x' = sat(x + h*dt, 0, CAP);
    output level = x;
    output full = x >= CAP;

Statements end with ``;``; ``#`` and ``//`` start comments. Expressions
support ``if c then a else b``, ``&&``/``and``, ``||``/``or``, ``!``/``not``,
comparisons, ``+ - * /`` and the builtins ``sat min max abs sqrt sin cos
tan exp log``. ``dt`` is the model step. Enum labels are written bare.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from pathlib import Path

from stlf.errors import (
    CyclicDependency,
    ModelSyntaxError,
    TypeMismatch,
    UnknownBuiltin,
)
from stlf.models.expr import (
    ARITH_OPS,
    BOOL,
    BUILTINS,
    EQ_OPS,
    LOGIC_OPS,
    ORDER_OPS,
    REAL,
    Bin,
    BoolLit,
    Call,
    Ite,
    Label,
    Num,
    Unary,
    Var,
    free_vars,
)
from stlf.models.ir import (
    ModelIR,
    OutputDecl,
    StateDecl,
    VarDecl,
    eval_expr,
    kind_of_type,
    type_of_kind,
)
from stlf.signals import BoolKind, EnumKind, RealKind

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*|//[^\n]*)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>==|!=|<=|>=|&&|\|\||[-+*/()\[\]{},;:=<>!'])
""",
    re.X,
)
_KEYWORDS = {
    "model", "step", "const", "input", "state", "output", "init", "if", "then",
    "else", "true", "false", "and", "or", "not", "dt",
}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text):
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ModelSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


@dataclass
class _Stmt:
    what: str
    name: str
    kind: object
    expr: object
    tok: _Tok


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.pos = 0

    @property
    def tok(self):
        return self.toks[self.pos]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return ModelSyntaxError(f"{msg}, found {found!r}", tok.line, tok.col)

    def at(self, *texts):
        return self.tok.kind in ("op", "ident") and self.tok.text in texts

    def accept(self, *texts):
        if self.at(*texts):
            self.pos += 1
            return self.toks[self.pos - 1]
        return None

    def expect(self, text):
        tok = self.accept(text)
        if tok is None:
            raise self.error(f"expected {text!r}")
        return tok

    def ident(self):
        tok = self.tok
        if tok.kind != "ident" or tok.text in _KEYWORDS:
            raise self.error("expected a name")
        self.pos += 1
        return tok.text

    # -- statements
    def statements(self):
        out = []
        while self.tok.kind != "eof":
            out.append(self.statement())
        return out

    def statement(self):
        tok = self.tok
        if self.accept("model"):
            s = _Stmt("model", self.ident(), None, None, tok)
        elif self.accept("step"):
            s = _Stmt("step", "", None, self.expr(), tok)
        elif self.accept("const"):
            name = self.ident()
            self.expect("=")
            s = _Stmt("const", name, None, self.expr(), tok)
        elif self.accept("input"):
            name = self.ident()
            self.expect(":")
            s = _Stmt("input", name, self.kind(), None, tok)
        elif self.accept("state"):
            name = self.ident()
            kind = self.kind() if self.accept(":") else None
            self.expect("init")
            s = _Stmt("state", name, kind, self.expr(), tok)
        elif self.accept("output"):
            name = self.ident()
            self.expect("=")
            s = _Stmt("output", name, None, self.expr(), tok)
        elif tok.kind == "ident" and tok.text not in _KEYWORDS:
            name = self.ident()
            self.expect("'")
            self.expect("=")
            s = _Stmt("update", name, None, self.expr(), tok)
        else:
            raise self.error("expected a statement")
        self.expect(";")
        return s

    def kind(self):
        tok = self.tok
        if self.accept("bool"):
            return BoolKind()
        if self.accept("real"):
            if not self.accept("["):
                return RealKind()
            lo = self.expr()
            self.expect(",")
            hi = self.expr()
            self.expect("]")
            return ("real", lo, hi, tok)
        if self.accept("enum"):
            self.expect("{")
            labels = [self.ident()]
            while self.accept(","):
                labels.append(self.ident())
            self.expect("}")
            try:
                return EnumKind(tuple(labels))
            except ValueError as exc:
                raise ModelSyntaxError(str(exc), tok.line, tok.col) from None
        raise self.error("expected a kind (real, real[lo,hi], bool, enum{...})")

    # -- expressions
    def expr(self):
        if self.accept("if"):
            c = self.expr()
            self.expect("then")
            a = self.expr()
            self.expect("else")
            return Ite(c, a, self.expr())
        return self.disj()

    def disj(self):
        left = self.conj()
        while self.accept("||", "or"):
            left = Bin("||", left, self.conj())
        return left

    def conj(self):
        left = self.neg()
        while self.accept("&&", "and"):
            left = Bin("&&", left, self.neg())
        return left

    def neg(self):
        if self.accept("!", "not"):
            return Unary("!", self.neg())
        return self.cmp()

    def cmp(self):
        left = self.add()
        tok = self.accept(*ORDER_OPS, *EQ_OPS)
        if tok:
            return Bin(tok.text, left, self.add())
        return left

    def add(self):
        left = self.mul()
        while self.at("+", "-"):
            op = self.tok.text
            self.pos += 1
            left = Bin(op, left, self.mul())
        return left

    def mul(self):
        left = self.unary()
        while self.at("*", "/"):
            op = self.tok.text
            self.pos += 1
            left = Bin(op, left, self.unary())
        return left

    def unary(self):
        if self.accept("-"):
            arg = self.unary()
            if isinstance(arg, Num):
                return Num(-arg.value)
            return Unary("-", arg)
        return self.primary()

    def primary(self):
        tok = self.tok
        if tok.kind == "num":
            self.pos += 1
            return Num(Fraction(tok.text))
        if self.accept("true"):
            return BoolLit(True)
        if self.accept("false"):
            return BoolLit(False)
        if self.accept("dt"):
            return Var("dt")
        if self.at("if"):
            return self.expr()
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "ident" and tok.text not in _KEYWORDS:
            self.pos += 1
            if self.accept("("):
                if tok.text not in BUILTINS:
                    raise UnknownBuiltin(f"unknown builtin {tok.text!r}", tok.line, tok.col)
                args = [self.expr()]
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
                want = BUILTINS[tok.text]
                if (want is None and len(args) < 2) or (want is not None and len(args) != want):
                    need = "at least 2" if want is None else str(want)
                    raise ModelSyntaxError(
                        f"{tok.text} takes {need} arguments, got {len(args)}", tok.line, tok.col
                    )
                return Call(tok.text, tuple(args))
            return Var(tok.text)
        raise self.error("expected an expression")


# ------------------------------------------------------------ checking


class _Checker:
    """Resolves names and computes expression types for one model."""

    def __init__(self, step):
        self.step = step
        self.consts = {}
        self.labels = {}
        self.types = {}

    def add_labels(self, kind, tok):
        if not isinstance(kind, EnumKind):
            return
        for label in kind.labels:
            other = self.labels.get(label)
            if other is not None and other != kind:
                raise ModelSyntaxError(
                    f"enum label {label!r} belongs to two different enums", tok.line, tok.col
                )
            self.labels[label] = kind

    def resolve(self, e, scope, tok):
        """Replace constants, ``dt`` and labels; reject names outside ``scope``."""
        if isinstance(e, Var):
            if e.name == "dt":
                return Num(self.step)
            if e.name in self.consts:
                return self.consts[e.name]
            if e.name in scope:
                return e
            if e.name in self.labels:
                return Label(e.name, self.labels[e.name])
            where = "here" if e.name in self.types else "in this model"
            raise ModelSyntaxError(f"name {e.name!r} is not defined {where}", tok.line, tok.col)
        if isinstance(e, Unary):
            return Unary(e.op, self.resolve(e.arg, scope, tok))
        if isinstance(e, Bin):
            return Bin(e.op, self.resolve(e.left, scope, tok), self.resolve(e.right, scope, tok))
        if isinstance(e, Call):
            return Call(e.fn, tuple(self.resolve(a, scope, tok) for a in e.args))
        if isinstance(e, Ite):
            return Ite(
                self.resolve(e.cond, scope, tok),
                self.resolve(e.then, scope, tok),
                self.resolve(e.other, scope, tok),
            )
        return e

    def type_of(self, e, tok):
        def bad(msg):
            return TypeMismatch(msg, tok.line, tok.col)

        if isinstance(e, Num):
            return REAL
        if isinstance(e, BoolLit):
            return BOOL
        if isinstance(e, Label):
            return e.kind
        if isinstance(e, Var):
            return self.types[e.name]
        if isinstance(e, Unary):
            t = self.type_of(e.arg, tok)
            want = REAL if e.op == "-" else BOOL
            if t != want:
                raise bad(f"operator {e.op!r} needs a {want} operand, got {t}")
            return want
        if isinstance(e, Bin):
            a, b = self.type_of(e.left, tok), self.type_of(e.right, tok)
            if e.op in ARITH_OPS or e.op in ORDER_OPS:
                if a != REAL or b != REAL:
                    raise bad(f"operator {e.op!r} needs real operands, got {a} and {b}")
                return REAL if e.op in ARITH_OPS else BOOL
            if e.op in LOGIC_OPS:
                if a != BOOL or b != BOOL:
                    raise bad(f"operator {e.op!r} needs bool operands, got {a} and {b}")
                return BOOL
            if e.op in EQ_OPS:
                if a != b:
                    raise bad(f"cannot compare {a} with {b}")
                return BOOL
            raise bad(f"unknown operator {e.op!r}")
        if isinstance(e, Call):
            for arg in e.args:
                t = self.type_of(arg, tok)
                if t != REAL:
                    raise bad(f"{e.fn} needs real arguments, got {t}")
            return REAL
        if isinstance(e, Ite):
            c = self.type_of(e.cond, tok)
            if c != BOOL:
                raise bad(f"if condition must be bool, got {c}")
            a, b = self.type_of(e.then, tok), self.type_of(e.other, tok)
            if a != b:
                raise bad(f"if branches differ in type: {a} and {b}")
            return a
        raise TypeError(f"not an expression: {e!r}")

    def const_value(self, e, tok):
        e = self.resolve(e, (), tok)
        t = self.type_of(e, tok)
        v = eval_expr(e, {}, exact=True)
        if t == REAL:
            return Num(Fraction(v))
        if t == BOOL:
            return BoolLit(bool(v))
        return Label(v, t)


def _real_kind(spec, checker, tok):
    _, lo_e, hi_e, ktok = spec
    lo, hi = checker.const_value(lo_e, ktok), checker.const_value(hi_e, ktok)
    if not (isinstance(lo, Num) and isinstance(hi, Num)):
        raise TypeMismatch("range bounds must be real constants", ktok.line, ktok.col)
    if not lo.value < hi.value:
        raise ModelSyntaxError(f"empty range [{lo.value}, {hi.value}]", ktok.line, ktok.col)
    return RealKind(_plain(lo.value), _plain(hi.value))


def _plain(q: Fraction):
    return int(q) if q.denominator == 1 else float(q)


def parse_model(text: str) -> ModelIR:
    """Parse and check a model; see the module docstring for the format."""
    stmts = _Parser(text).statements()
    name = "model"
    step = Fraction(1)
    for s in stmts:
        if s.what == "model":
            name = s.name
        elif s.what == "step":
            ck = _Checker(Fraction(1))
            v = ck.const_value(s.expr, s.tok)
            if not isinstance(v, Num) or v.value <= 0:
                raise ModelSyntaxError("step must be a positive number", s.tok.line, s.tok.col)
            step = v.value
    ck = _Checker(step)

    declared = {}
    for s in stmts:
        if s.what in ("const", "input", "state", "output"):
            if s.name in declared or s.name in _KEYWORDS:
                raise ModelSyntaxError(f"name {s.name!r} declared twice", s.tok.line, s.tok.col)
            declared[s.name] = s.what
        if s.what == "const":
            ck.consts[s.name] = ck.const_value(s.expr, s.tok)

    inputs = []
    for s in stmts:
        if s.what == "input":
            kind = _real_kind(s.kind, ck, s.tok) if isinstance(s.kind, tuple) else s.kind
            if isinstance(kind, RealKind) and not kind.bounded:
                raise ModelSyntaxError(
                    f"input {s.name!r} needs a bounded range real[lo,hi]", s.tok.line, s.tok.col
                )
            ck.add_labels(kind, s.tok)
            inputs.append(VarDecl(s.name, kind))
            ck.types[s.name] = type_of_kind(kind)
    state_kinds = {}
    for s in stmts:
        if s.what == "state":
            kind = _real_kind(s.kind, ck, s.tok) if isinstance(s.kind, tuple) else s.kind
            ck.add_labels(kind, s.tok)
            state_kinds[s.name] = kind

    input_names = {d.name for d in inputs}
    states = []
    for s in stmts:
        if s.what != "state":
            continue
        init = ck.resolve(s.expr, input_names, s.tok)
        t = ck.type_of(init, s.tok)
        kind = state_kinds[s.name]
        if kind is None:
            kind = kind_of_type(t)
        elif type_of_kind(kind) != t:
            raise TypeMismatch(
                f"state {s.name!r} is {kind} but its init is {t}", s.tok.line, s.tok.col
            )
        ck.types[s.name] = type_of_kind(kind)
        states.append(StateDecl(s.name, kind, init))

    output_stmts = {s.name: s for s in stmts if s.what == "output"}
    all_names = set(input_names) | {st.name for st in states} | set(output_stmts)
    resolved = {n: ck.resolve(s.expr, all_names, s.tok) for n, s in output_stmts.items()}
    graph = {n: sorted(free_vars(e) & set(output_stmts)) for n, e in resolved.items()}
    try:
        TopologicalSorter(graph).prepare()
    except CycleError as exc:
        cycle = " -> ".join(exc.args[1])
        tok = output_stmts[exc.args[1][0]].tok
        raise CyclicDependency(f"outputs depend on each other: {cycle}", tok.line, tok.col) from None
    # keep declaration order where the dependencies allow it
    order = _stable_topo(list(output_stmts), graph)
    outputs = []
    for n in order:
        t = ck.type_of(resolved[n], output_stmts[n].tok)
        ck.types[n] = t
        outputs.append(OutputDecl(n, kind_of_type(t), resolved[n]))

    updates = {}
    for s in stmts:
        if s.what != "update":
            continue
        if s.name not in state_kinds:
            raise ModelSyntaxError(
                f"{s.name!r} is not a state and cannot be updated", s.tok.line, s.tok.col
            )
        if s.name in updates:
            raise ModelSyntaxError(f"state {s.name!r} updated twice", s.tok.line, s.tok.col)
        e = ck.resolve(s.expr, all_names, s.tok)
        t = ck.type_of(e, s.tok)
        if t != ck.types[s.name]:
            raise TypeMismatch(
                f"update of {s.name!r} has type {t}, expected {ck.types[s.name]}",
                s.tok.line,
                s.tok.col,
            )
        updates[s.name] = e
    for st in states:
        if st.name not in updates:
            raise ModelSyntaxError(f"state {st.name!r} has no update {st.name}' = ...;")

    return ModelIR(
        name=name,
        step=step,
        inputs=tuple(inputs),
        states=tuple(states),
        outputs=tuple(outputs),
        updates=tuple((st.name, updates[st.name]) for st in states),
    )


def _stable_topo(names, graph):
    done, out = set(), []
    pending = list(names)
    while pending:
        for n in pending:
            if all(d in done for d in graph[n]):
                out.append(n)
                done.add(n)
                pending.remove(n)
                break
    return out


def load_model(path) -> ModelIR:
    return parse_model(Path(path).read_text())
