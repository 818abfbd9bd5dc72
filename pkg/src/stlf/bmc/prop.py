"""Safety properties: ``G`` over a formula without temporal operators."""

from __future__ import annotations

from dataclasses import dataclass

from stlf.errors import NestedTemporal, PropertyNotSafety, UnboundedInterval
from stlf.signals import window_offsets
from stlf.stl.ast import Globally, Interval, is_temporal_free, max_offset
from stlf.stl.transform import expand_bounded_eventually, to_core


@dataclass(frozen=True)
class SafetyProperty:
    """``body`` must hold at every step in ``[first, last]`` (``last`` None: forever).

    ``body`` is a core formula whose atoms may read up to ``lookahead`` steps
    ahead (introduced by expanding bounded eventually).
    """

    body: object
    first: int = 0
    last: int | None = None
    source: object = None

    def __post_init__(self):
        if not is_temporal_free(self.body):
            raise PropertyNotSafety("safety property body contains temporal operators")

    @property
    def lookahead(self) -> int:
        return max_offset(self.body)

    def applies_at(self, i: int) -> bool:
        return i >= self.first and (self.last is None or i <= self.last)

    def checked_steps(self, k: int) -> range:
        """Steps whose body can be decided on an unrolling of ``k`` steps."""
        hi = k - self.lookahead
        if self.last is not None:
            hi = min(hi, self.last)
        return range(self.first, hi + 1)

    def as_formula(self, k: int, step: float):
        """``G`` restricted to the steps decided by a ``k``-step unrolling."""
        steps = self.checked_steps(k)
        if not steps:
            raise ValueError(f"no step of the property is decided within {k} steps")
        return Globally(Interval(steps.start * step, steps[-1] * step), self.body)

    @classmethod
    def from_formula(cls, formula, step: float) -> "SafetyProperty":
        """Accept ``G phi`` or ``G[a,b] phi`` with ``phi`` free of temporal operators
        after bounded eventually has been expanded."""
        try:
            f = expand_bounded_eventually(formula, step)
        except (NestedTemporal, UnboundedInterval) as exc:
            raise PropertyNotSafety(f"not a safety property: {exc}") from None
        if not isinstance(f, Globally):
            raise PropertyNotSafety("a safety property must have the form G(...)")
        if not is_temporal_free(f.arg):
            raise PropertyNotSafety("nested temporal operators inside G are not supported")
        first, last = window_offsets(f.interval, step)
        return cls(to_core(f.arg), first, last, formula)
