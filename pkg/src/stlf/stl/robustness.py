"""Quantitative (robustness) semantics.

Each subformula is evaluated once for every start index, bottom-up, so
nested temporal operators cost a sliding-window pass instead of a nested
loop. Evaluation failures (a window past the trace end, a domain error in
an atom) are kept per index as :class:`_Fault` markers and only raised if
they reach the index that was asked for, which matches what a top-down
recursive evaluation would do.

Atom table, for ``v = mu(t)``::

    true      (0, +1)          false     (0, -1)
    b / !b    (0, +1) or (0, -1)
    v >= 0    (v, 0)           v <= 0    (-v, 0)
    v > 0     (v, 0),  (0, -1) when v == 0
    v < 0     (-v, 0), (0, -1) when v == 0
    v = 0     (-|v|, 0)
    v != 0    (|v|, 0), (0, -1) when v == 0
"""

from __future__ import annotations

from collections import deque

from stlf.errors import DomainError, EmptyWindow, InsufficientTrace
from stlf.signals import window_offsets
from stlf.stl.ast import (
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
    Not,
    Or,
    RealSignal,
    Top,
    Until,
)
from stlf.stl.mu import apply_func, apply_op, check_bound, numeric_columns
from stlf.stl.value import EPS, NEG_EPS, RobustnessValue


class _Fault:
    __slots__ = ("exc",)

    def __init__(self, exc):
        self.exc = exc


def atom_robustness(v, rel) -> RobustnessValue:
    if rel == ">=":
        return RobustnessValue(v, 0)
    if rel == "<=":
        return RobustnessValue(-v, 0)
    if rel == ">":
        return RobustnessValue(v, 0) if v != 0 else NEG_EPS
    if rel == "<":
        return RobustnessValue(-v, 0) if v != 0 else NEG_EPS
    if rel == "=":
        return RobustnessValue(-abs(v), 0)
    if rel == "!=":
        return RobustnessValue(abs(v), 0) if v != 0 else NEG_EPS
    raise ValueError(f"unknown relation {rel!r}")


def _lift2(fn, xs, ys):
    out = []
    for x, y in zip(xs, ys):
        if isinstance(x, _Fault):
            out.append(x)
        elif isinstance(y, _Fault):
            out.append(y)
        else:
            out.append(fn(x, y))
    return out


class _Evaluator:
    def __init__(self, trace, clamp):
        self.n = len(trace)
        self.step = trace.step
        self.clamp = clamp
        self.columns = numeric_columns(trace)
        self.bools = {name: trace[name].samples for name in trace.names()}

    # -- mu
    def mu(self, mu):
        n = self.n
        if isinstance(mu, Const):
            return [mu.value] * n
        if isinstance(mu, RealSignal):
            col = self.columns[mu.name]
            return [self._sample(col, mu.name, t + mu.offset) for t in range(n)]
        if isinstance(mu, BinOp):
            op = mu.op

            def safe(a, b):
                try:
                    return apply_op(op, a, b)
                except DomainError as exc:
                    return _Fault(exc)

            return _lift2(safe, self.mu(mu.left), self.mu(mu.right))
        if isinstance(mu, Func):
            out = []
            for x in self.mu(mu.arg):
                if isinstance(x, _Fault):
                    out.append(x)
                    continue
                try:
                    out.append(apply_func(mu.fn, x))
                except DomainError as exc:
                    out.append(_Fault(exc))
            return out
        raise TypeError(f"not a mu expression: {mu!r}")

    def _sample(self, col, name, j):
        if j < self.n:
            return col[j]
        if self.clamp:
            return col[-1]
        return _Fault(InsufficientTrace(f"{name}@{j} is past the trace end ({self.n} samples)"))

    # -- formulas
    def eval(self, f):
        n = self.n
        if isinstance(f, Top):
            return [EPS] * n
        if isinstance(f, Bottom):
            return [NEG_EPS] * n
        if isinstance(f, BoolSignal):
            col = self.bools[f.name]
            out = []
            for t in range(n):
                v = self._sample(col, f.name, t + f.offset)
                if isinstance(v, _Fault):
                    out.append(v)
                else:
                    out.append(EPS if bool(v) != f.negated else NEG_EPS)
            return out
        if isinstance(f, Cmp):
            rel = f.rel
            return [
                v if isinstance(v, _Fault) else atom_robustness(v, rel)
                for v in self.mu(f.mu)
            ]
        if isinstance(f, Or):
            return _lift2(max, self.eval(f.left), self.eval(f.right))
        if isinstance(f, And):
            return _lift2(min, self.eval(f.left), self.eval(f.right))
        if isinstance(f, Globally):
            return self._sliding(self.eval(f.arg), f.interval, pick_min=True)
        if isinstance(f, Eventually):
            return self._sliding(self.eval(f.arg), f.interval, pick_min=False)
        if isinstance(f, Until):
            return self._until(self.eval(f.left), self.eval(f.right), f.interval)
        if isinstance(f, (Not, Implies)):
            raise ValueError("formula is not in core form; apply to_core first")
        raise TypeError(f"not a formula: {f!r}")

    def _window(self, t, lo_off, hi_off):
        """Index window for start ``t`` or a fault marker."""
        n = self.n
        lo = t + lo_off
        hi = n - 1 if hi_off is None else t + hi_off
        if hi >= n or lo >= n:
            if not self.clamp:
                return _Fault(
                    InsufficientTrace(f"window [{lo}, {hi}] at t={t} exceeds trace length {n}")
                )
            hi = min(hi, n - 1)
            if lo > hi:
                return _Fault(EmptyWindow(f"window at t={t} is empty after clamping"))
        return lo, hi

    def _sliding(self, vals, interval, pick_min):
        n = self.n
        lo_off, hi_off = window_offsets(interval, self.step)
        next_bad = [n] * (n + 1)
        for i in range(n - 1, -1, -1):
            next_bad[i] = i if isinstance(vals[i], _Fault) else next_bad[i + 1]
        out = []
        dq = deque()  # indices whose values are monotone from front to back
        pushed = 0
        for t in range(n):
            w = self._window(t, lo_off, hi_off)
            if isinstance(w, _Fault):
                out.append(w)
                continue
            lo, hi = w
            bad = next_bad[lo]
            if bad <= hi:
                out.append(vals[bad])
                continue
            while pushed <= hi:
                v = vals[pushed]
                if isinstance(v, _Fault):
                    dq.clear()
                else:
                    if pick_min:
                        while dq and vals[dq[-1]] >= v:
                            dq.pop()
                    else:
                        while dq and vals[dq[-1]] <= v:
                            dq.pop()
                    dq.append(pushed)
                pushed += 1
            while dq[0] < lo:
                dq.popleft()
            out.append(vals[dq[0]])
        return out

    def _until(self, left, right, interval):
        lo_off, hi_off = window_offsets(interval, self.step)
        out = []
        for t in range(self.n):
            w = self._window(t, lo_off, hi_off)
            if isinstance(w, _Fault):
                out.append(w)
                continue
            lo, hi = w
            best = None
            run = None  # min of left over [t, j]
            fault = None
            for j in range(t, hi + 1):
                a = left[j]
                if isinstance(a, _Fault):
                    fault = a
                    break
                run = a if run is None or a < run else run
                if j >= lo:
                    b = right[j]
                    if isinstance(b, _Fault):
                        fault = b
                        break
                    cand = b if b < run else run
                    if best is None or cand > best:
                        best = cand
            out.append(fault if fault is not None else best)
        return out


def robustness_profile(formula, trace, clamp=False) -> list:
    """Robustness at every start index.

    Indices whose evaluation fails hold the exception instance instead of a
    value.
    """
    check_bound(formula, trace)
    vals = _Evaluator(trace, clamp).eval(formula)
    return [v.exc if isinstance(v, _Fault) else v for v in vals]


def robustness(formula, trace, t_index: int = 0, clamp: bool = False) -> RobustnessValue:
    """Robustness of a core formula on ``trace`` at sample ``t_index``.

    Nonnegative (lexicographically) exactly when the formula holds.
    """
    if not 0 <= t_index < len(trace):
        raise IndexError(f"t_index {t_index} outside trace of length {len(trace)}")
    check_bound(formula, trace)
    v = _Evaluator(trace, clamp).eval(formula)[t_index]
    if isinstance(v, _Fault):
        raise v.exc
    return v

