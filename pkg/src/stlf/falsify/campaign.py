"""Multi-run falsification campaigns and their reports.

Every requirement gets ``runs`` independent hill climbs seeded with
``base_seed + run_index``. Results are merged by run index, so a campaign
gives the same report whether runs execute serially or in worker processes.

Report notation: ``v(m/runs)`` per requirement, where ``m`` runs found a
violation and ``v`` is 1 when any did. Model-level summaries group the
violated requirements by ``m``, e.g. ``2(30/30), 1(29/30)``.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from stlf.falsify.search import SearchConfig, safe_hill_climb
from stlf.models.sim import SimConfig, simulate
from stlf.signals import trace_to_rows


@dataclass
class RequirementReport:
    name: str
    formula: str
    results: list  # SearchResult, indexed by run

    @property
    def runs(self) -> int:
        return len(self.results)

    @property
    def violations(self) -> int:
        return sum(r.violated for r in self.results)

    @property
    def errors(self) -> int:
        return sum(r.error is not None for r in self.results)

    @property
    def notation(self) -> str:
        m = self.violations
        return f"{1 if m else 0}({m}/{self.runs})"

    def best_result(self):
        done = [r for r in self.results if r.best_fitness is not None]
        if not done:
            return None
        return min(done, key=lambda r: (r.best_fitness, r.seed))

    def witnesses(self) -> list:
        return [
            {
                "run": i,
                "seed": r.seed,
                "input": r.best_input.to_json(),
                "fitness": r.best_fitness.to_json(),
                "iteration": r.found_at,
            }
            for i, r in enumerate(self.results)
            if r.violated
        ]


@dataclass
class CampaignReport:
    model: str
    config: SearchConfig
    sim: SimConfig
    segments: int
    requirements: list = field(default_factory=list)  # RequirementReport
    meta: dict = field(default_factory=dict)
    excerpts: dict = field(default_factory=dict)  # requirement -> rows of the best witness trace

    @property
    def violated_requirements(self) -> int:
        return sum(1 for r in self.requirements if r.violations)

    @property
    def notation(self) -> str:
        """Violated requirements grouped by how many runs violated them."""
        counts = Counter((r.violations, r.runs) for r in self.requirements if r.violations)
        if not counts:
            return "-"
        ordered = sorted(counts.items(), key=lambda kv: (-kv[0][0], kv[0][1]))
        return ", ".join(f"{n}({m}/{runs})" for (m, runs), n in ordered)

    def to_json(self) -> dict:
        """Deterministic report; wall-clock timing lives in :meth:`timing_json`."""
        reqs = []
        for r in self.requirements:
            best = r.best_result()
            reqs.append(
                {
                    "name": r.name,
                    "formula": r.formula,
                    "runs": r.runs,
                    "violations": r.violations,
                    "errors": [
                        {"run": i, "error": x.error} for i, x in enumerate(r.results) if x.error
                    ],
                    "notation": r.notation,
                    "best_fitness": None if best is None else best.best_fitness.to_json(),
                    "best_witness": None
                    if best is None
                    else {
                        "seed": best.seed,
                        "input": best.best_input.to_json(),
                        "trace_excerpt": self.excerpts.get(r.name, []),
                    },
                    "witnesses": r.witnesses(),
                }
            )
        return {
            **self.meta,
            "model": self.model,
            "config": {
                "iterations": self.config.iterations,
                "runs": self.config.runs,
                "sigma_fraction": self.config.sigma_fraction,
                "base_seed": self.config.base_seed,
                "stop_on_violation": self.config.stop_on_violation,
                "nsteps": self.sim.nsteps,
                "segments": self.segments,
            },
            "summary": {
                "requirements": len(self.requirements),
                "violated": self.violated_requirements,
                "notation": self.notation,
            },
            "requirements": reqs,
        }

    def timing_json(self) -> dict:
        return {
            "model": self.model,
            "requirements": {
                r.name: {
                    "wall_time": [x.wall_time for x in r.results],
                    "avg_wall_time": sum(x.wall_time for x in r.results) / max(r.runs, 1),
                }
                for r in self.requirements
            },
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", "requirement", "runs", "violations", "notation", "best_fitness"])
        for r in self.requirements:
            best = r.best_result()
            w.writerow(
                [
                    self.model,
                    r.name,
                    r.runs,
                    r.violations,
                    r.notation,
                    "" if best is None else str(best.best_fitness),
                ]
            )
        return buf.getvalue()

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"


def _run_one(task):
    model, formula, space, config, seed, sim_cfg, clamp = task
    return safe_hill_climb(model, formula, space, config, seed, sim_cfg, clamp)


def falsify_campaign(
    model,
    requirements,
    space,
    config: SearchConfig,
    sim_cfg: SimConfig | None = None,
    jobs: int = 1,
    clamp: bool = False,
    excerpt_rows: int = 20,
) -> CampaignReport:
    """Run ``config.runs`` hill climbs for every requirement.

    ``requirements`` are :class:`stlf.stl.reqfile.Requirement` objects.
    ``jobs > 1`` spreads runs over worker processes.
    """
    sim_cfg = sim_cfg or SimConfig()
    tasks = [
        (model, req.core, space, config, config.base_seed + i, sim_cfg, clamp)
        for req in requirements
        for i in range(config.runs)
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_run_one(t) for t in tasks]
    report = CampaignReport(model.name, config, sim_cfg, space.segments)
    for j, req in enumerate(requirements):
        chunk = results[j * config.runs:(j + 1) * config.runs]
        rr = RequirementReport(req.name, req.text, chunk)
        report.requirements.append(rr)
        best = rr.best_result()
        if best is not None and excerpt_rows:
            tr = simulate(model, best.best_input, sim_cfg)
            report.excerpts[req.name] = trace_to_rows(tr, 0, excerpt_rows)
    return report
