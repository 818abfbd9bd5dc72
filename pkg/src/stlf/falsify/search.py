"""Hill climbing over model inputs with robustness as fitness.

A candidate is a flat tuple with one value per (input, segment) pair. Real
values are perturbed by zero-mean Gaussian noise with variance
``sigma_fraction * (hi - lo)`` and capped at the range bounds; boolean and
enum values switch to a different value with probability ``1 / len(dims)``.
A tweak replaces the current candidate only if its fitness is strictly
lower, and a negative fitness is a requirement violation.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from stlf.errors import StlfError
from stlf.models.ir import VarDecl
from stlf.models.sim import Constant, InputAssignment, PiecewiseConstant, SimConfig, simulate
from stlf.signals import BoolKind, RealKind
from stlf.stl.robustness import robustness
from stlf.stl.value import ZERO, RobustnessValue


@dataclass(frozen=True)
class Dim:
    name: str
    kind: object
    segment: int


class SearchSpace:
    """Input space of a model: every input repeated once per segment."""

    def __init__(self, inputs, segments: int = 1):
        if segments < 1:
            raise ValueError("segments must be >= 1")
        self.inputs = tuple(inputs)
        self.segments = segments
        self.dims = tuple(
            Dim(d.name, d.kind, j) for d in self.inputs for j in range(segments)
        )
        if not self.dims:
            raise ValueError("the search space has no dimensions (model without inputs)")
        for d in self.dims:
            if isinstance(d.kind, RealKind) and not (
                d.kind.bounded and math.isfinite(d.kind.lo) and math.isfinite(d.kind.hi)
            ):
                raise ValueError(f"input {d.name!r} needs a finite range")

    @classmethod
    def from_model(cls, model, segments=1, ranges=None):
        """Search space of ``model``; ``ranges`` narrows real inputs to ``{name: (lo, hi)}``."""
        ranges = ranges or {}
        decls = []
        for d in model.inputs:
            if d.name in ranges:
                lo, hi = ranges[d.name]
                if not isinstance(d.kind, RealKind):
                    raise ValueError(f"range override for non-real input {d.name!r}")
                if d.kind.bounded and (lo < d.kind.lo or hi > d.kind.hi):
                    raise ValueError(f"range override for {d.name!r} exceeds {d.kind}")
                d = VarDecl(d.name, RealKind(lo, hi))
            decls.append(d)
        unknown = set(ranges) - {d.name for d in model.inputs}
        if unknown:
            raise ValueError(f"range overrides for unknown inputs {sorted(unknown)}")
        return cls(decls, segments)

    def __len__(self):
        return len(self.dims)

    def random_point(self, rng) -> tuple:
        out = []
        for d in self.dims:
            k = d.kind
            if isinstance(k, RealKind):
                out.append(rng.uniform(k.lo, k.hi))
            elif isinstance(k, BoolKind):
                out.append(rng.random() < 0.5)
            else:
                out.append(rng.choice(k.labels))
        return tuple(out)

    def contains(self, values) -> bool:
        return len(values) == len(self.dims) and all(
            d.kind.contains(v) for d, v in zip(self.dims, values)
        )

    def decode(self, values) -> InputAssignment:
        out = {}
        k = self.segments
        for i, d in enumerate(self.inputs):
            chunk = tuple(values[i * k:(i + 1) * k])
            out[d.name] = Constant(chunk[0]) if k == 1 else PiecewiseConstant(chunk)
        return InputAssignment(out)

    def encode(self, assignment: InputAssignment) -> tuple:
        out = []
        for d in self.inputs:
            src = assignment[d.name]
            if isinstance(src, Constant):
                out.extend([src.value] * self.segments)
            elif src.count == self.segments:
                out.extend(src.segments)
            else:
                raise ValueError(f"{d.name!r} has {src.count} segments, expected {self.segments}")
        return tuple(out)


@dataclass(frozen=True)
class SearchConfig:
    iterations: int = 150
    runs: int = 30
    sigma_fraction: float = 0.1
    base_seed: int = 0
    stop_on_violation: bool = True

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not 0 < self.sigma_fraction <= 1:
            raise ValueError("sigma_fraction must be in (0, 1]")


def tweak(values, space: SearchSpace, config: SearchConfig, rng) -> tuple:
    """Perturb a candidate: Gaussian step on reals, random switch on discrete values."""
    flip_p = 1.0 / len(space.dims)
    out = []
    for d, v in zip(space.dims, values):
        k = d.kind
        if isinstance(k, RealKind):
            std = math.sqrt(config.sigma_fraction * (k.hi - k.lo))
            v = v + rng.gauss(0.0, std)
            out.append(min(max(v, k.lo), k.hi))
        elif rng.random() < flip_p:
            if isinstance(k, BoolKind):
                out.append(not v)
            else:
                out.append(rng.choice([x for x in k.labels if x != v]) if len(k.labels) > 1 else v)
        else:
            out.append(v)
    return tuple(out)


def fitness(model, formula, assignment, cfg: SimConfig, clamp=False) -> RobustnessValue:
    """Robustness of the core ``formula`` at time 0 of the simulated trace."""
    return robustness(formula, simulate(model, assignment, cfg), 0, clamp)


@dataclass
class SearchResult:
    seed: int
    best: tuple  # candidate values
    best_input: InputAssignment
    best_fitness: RobustnessValue | None
    iterations: int  # tweaks evaluated
    found_at: int  # iteration at which ``best`` was accepted (0: initial candidate)
    history: list = field(default_factory=list)  # current fitness after each iteration
    error: str | None = None
    wall_time: float = field(default=0.0, compare=False)

    @property
    def violated(self) -> bool:
        return self.best_fitness is not None and self.best_fitness < ZERO


def hill_climb(model, formula, space, config, run_seed, sim_cfg=None, clamp=False) -> SearchResult:
    """One hill-climbing run, fully determined by ``run_seed``."""
    sim_cfg = sim_cfg or SimConfig()
    rng = random.Random(run_seed)
    start = time.perf_counter()

    def f(values):
        return fitness(model, formula, space.decode(values), sim_cfg, clamp)

    cs = space.random_point(rng)
    fcs = f(cs)
    history = [fcs]
    found_at = 0
    used = 0
    for it in range(1, config.iterations + 1):
        if config.stop_on_violation and fcs < ZERO:
            break
        ns = tweak(cs, space, config, rng)
        fns = f(ns)
        used = it
        if fns < fcs:
            cs, fcs, found_at = ns, fns, it
        history.append(fcs)
    return SearchResult(
        seed=run_seed,
        best=cs,
        best_input=space.decode(cs),
        best_fitness=fcs,
        iterations=used,
        found_at=found_at,
        history=history,
        wall_time=time.perf_counter() - start,
    )


def safe_hill_climb(*args, **kwargs) -> SearchResult:
    """:func:`hill_climb` that records evaluation errors instead of raising."""
    start = time.perf_counter()
    try:
        return hill_climb(*args, **kwargs)
    except StlfError as exc:
        seed = kwargs.get("run_seed", args[4] if len(args) > 4 else None)
        return SearchResult(
            seed=seed,
            best=(),
            best_input=InputAssignment({}),
            best_fitness=None,
            iterations=0,
            found_at=0,
            error=f"{type(exc).__name__}: {exc}",
            wall_time=time.perf_counter() - start,
        )


__all__ = [
    "Dim",
    "SearchSpace",
    "SearchConfig",
    "SearchResult",
    "tweak",
    "fitness",
    "hill_climb",
    "safe_hill_climb",
]
