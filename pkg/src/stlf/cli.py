"""Command-line front end: ``stlf monitor|falsify|check|bench``.

Settings come from command-line flags, then an optional TOML job file
(``--job``), then built-in defaults. Models are DSL files or built-in catalog
references ``builtin:NAME`` / ``builtin:NAME/FAULT``.

Exit codes: 0 all requirements hold (or are proven / bounded safe),
1 some requirement is violated, 2 usage or input error, 3 some check was
inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from stlf import __version__
from stlf.bmc import BmcConfig, SafetyProperty, check
from stlf.errors import PropertyNotSafety, StlfError, UnsupportedTheory
from stlf.falsify import SearchConfig, SearchSpace, falsify_campaign
from stlf.models.catalog import builtin_models, resolve_builtin
from stlf.models.dsl import load_model
from stlf.models.sim import SimConfig
from stlf.signals import load_trace_csv
from stlf.stl.parser import parse_stl
from stlf.stl.printer import format_formula
from stlf.stl.reqfile import Requirement, load_requirements
from stlf.stl.robustness import robustness, robustness_profile

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_VIOLATED, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2, 3

DEFAULTS = {
    "seed": 0,
    "runs": 30,
    "iterations": 150,
    "sigma_fraction": 0.1,
    "kmax": 10,
    "induction_depth": 10,
    "timeout": 10.0,
    "jobs": 1,
    "segments": None,
    "nsteps": None,
    "clamp": False,
    "solver": None,
    "model": None,
    "reqs": None,
    "out": None,
    "trace": None,
    "formula": None,
    "start": 0,
    "ranges": None,
}
_PATH_KEYS = ("model", "reqs", "out", "trace")


class UsageError(Exception):
    pass


# -- settings


def load_job(path) -> dict:
    """Flat TOML job file; relative paths are resolved against its directory."""
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"job file not found: {path}")
    with open(path, "rb") as fh:
        try:
            job = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise UsageError(f"{path}: {exc}") from None
    job.pop("mode", None)
    if "requirements" in job:
        job["reqs"] = job.pop("requirements")
    unknown = set(job) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"{path}: unknown job keys {sorted(unknown)}")
    for key in _PATH_KEYS:
        v = job.get(key)
        if isinstance(v, str) and not v.startswith("builtin:") and not os.path.isabs(v):
            job[key] = str(path.parent / v)
    return job


def resolve_settings(args) -> dict:
    out = dict(DEFAULTS)
    if getattr(args, "job", None):
        out.update(load_job(args.job))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None and v is not False:
            out[key] = v
    return out


def load_model_ref(ref):
    """Model, default requirements, default nsteps and default segments for ``ref``."""
    if ref is None:
        raise UsageError("no model given (--model)")
    if ref.startswith("builtin:"):
        try:
            entry, model = resolve_builtin(ref[len("builtin:"):])
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        return model, list(entry.requirements), entry.nsteps, entry.segments
    if not os.path.isfile(ref):
        raise UsageError(f"model file not found: {ref}")
    return load_model(ref), None, 40, 1


def load_reqs(settings, default=None):
    if settings["formula"]:
        return [Requirement("R1", settings["formula"], parse_stl(settings["formula"]))]
    if settings["reqs"]:
        if not os.path.isfile(settings["reqs"]):
            raise UsageError(f"requirements file not found: {settings['reqs']}")
        return load_requirements(settings["reqs"])
    if default is None:
        raise UsageError("no requirements given (--reqs or --formula)")
    return default


def _meta(settings, mode):
    return {"tool": "stlf", "version": __version__, "mode": mode, "seed": settings["seed"]}


def _write_json(path, data):
    text = json.dumps(data, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _sibling(path, suffix):
    p = Path(path)
    return p.with_name(p.stem + suffix)


def _table(header, rows):
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip() for r in [header, *rows]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


# -- monitor


def cmd_monitor(settings) -> int:
    if settings["trace"] is None:
        raise UsageError("no trace file given")
    if not os.path.isfile(settings["trace"]):
        raise UsageError(f"trace file not found: {settings['trace']}")
    trace = load_trace_csv(settings["trace"])
    reqs = load_reqs(settings)
    start = settings["start"]
    results = []
    violated = False
    for r in reqs:
        v = robustness(r.core, trace, start, settings["clamp"])
        violated |= not v.satisfied()
        entry = {
            "name": r.name,
            "formula": r.text,
            "start": start,
            "robustness": v.to_json(),
            "robustness_text": str(v),
            "satisfied": v.satisfied(),
        }
        if settings.get("profile"):
            entry["profile"] = [
                x.to_json() if not isinstance(x, Exception) else f"{type(x).__name__}: {x}"
                for x in robustness_profile(r.core, trace, settings["clamp"])
            ]
        results.append(entry)
    _write_json(settings["out"], {**_meta(settings, "monitor"), "results": results})
    return EXIT_VIOLATED if violated else EXIT_OK


# -- falsify


def _campaign(settings, model, reqs, nsteps, segments):
    space = SearchSpace.from_model(model, segments, settings["ranges"])
    config = SearchConfig(
        iterations=settings["iterations"],
        runs=settings["runs"],
        sigma_fraction=settings["sigma_fraction"],
        base_seed=settings["seed"],
    )
    report = falsify_campaign(
        model, reqs, space, config, SimConfig(nsteps), settings["jobs"], settings["clamp"]
    )
    report.meta = _meta(settings, "falsify")
    return report


def cmd_falsify(settings) -> int:
    model, default_reqs, nsteps, segments = load_model_ref(settings["model"])
    reqs = load_reqs(settings, default_reqs)
    nsteps = settings["nsteps"] or nsteps
    segments = settings["segments"] or segments
    report = _campaign(settings, model, reqs, nsteps, segments)
    out = settings["out"]
    if out is None:
        sys.stdout.write(report.dumps())
    else:
        Path(out).write_text(report.dumps())
        _write_json(_sibling(out, ".timing.json"), report.timing_json())
        _sibling(out, ".csv").write_text(report.to_csv())
        rows = [
            (r.name, r.notation, "" if r.best_result() is None else str(r.best_result().best_fitness))
            for r in report.requirements
        ]
        print(_table(("requirement", "violations", "best robustness"), rows))
        print(f"model {report.model}: {report.notation}")
    return EXIT_VIOLATED if report.violated_requirements else EXIT_OK


# -- check


def check_requirement(model, req, cfg: BmcConfig) -> dict:
    """Verdict of one requirement as a JSON-ready dict."""
    try:
        prop = SafetyProperty.from_formula(req.formula, model.step_float)
        verdict = check(model, prop, cfg)
    except (PropertyNotSafety, UnsupportedTheory) as exc:
        return {"name": req.name, "formula": req.text, "verdict": "Unsupported",
                "reason": f"{type(exc).__name__}: {exc}"}
    out = {"name": req.name, "formula": req.text, **verdict.to_json()}
    if verdict.name == "Falsified":
        replayed = robustness(prop.as_formula(verdict.k, model.step_float), verdict.trace)
        out["checked_formula"] = format_formula(prop.as_formula(verdict.k, model.step_float))
        out["replay_robustness"] = replayed.to_json()
    return out


def _bmc_config(settings):
    return BmcConfig(
        k_max=settings["kmax"],
        induction_depth_max=settings["induction_depth"],
        solver_cmd=settings["solver"],
        timeout_per_query=settings["timeout"],
    )


def _check_exit(verdicts):
    names = {v["verdict"] for v in verdicts}
    if "Falsified" in names:
        return EXIT_VIOLATED
    if names & {"Inconclusive", "Unsupported"}:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_check(settings) -> int:
    model, default_reqs, _, _ = load_model_ref(settings["model"])
    reqs = load_reqs(settings, default_reqs)
    cfg = _bmc_config(settings)
    verdicts = [check_requirement(model, r, cfg) for r in reqs]
    report = {
        **_meta(settings, "check"),
        "model": model.name,
        "config": {"kmax": cfg.k_max, "induction_depth": cfg.induction_depth_max,
                   "timeout": cfg.timeout_per_query},
        "requirements": verdicts,
    }
    _write_json(settings["out"], report)
    if settings["out"] is not None:
        print(_table(("requirement", "verdict", "detail"), [
            (v["name"], v["verdict"], v.get("depth", v.get("step", v.get("k", v.get("reason", "")))))
            for v in verdicts
        ]))
    return _check_exit(verdicts)


# -- bench


def cmd_bench(settings) -> int:
    cfg = _bmc_config(settings)
    rows = []
    records = []
    for name, entry in builtin_models().items():
        variants = [("healthy", entry.model)] + [(f.name, f.model) for f in entry.faults]
        for label, model in variants:
            reqs = list(entry.requirements)
            nsteps = settings["nsteps"] or entry.nsteps
            segments = settings["segments"] or entry.segments
            mt = _campaign(settings, model, reqs, nsteps, segments)
            mc = [check_requirement(model, r, cfg) for r in reqs]
            count = lambda v: sum(x["verdict"] == v for x in mc)  # noqa: E731
            row = {
                "model": name,
                "variant": label,
                "requirements": len(reqs),
                "mt_violations": mt.violated_requirements,
                "mt_notation": mt.notation,
                "mc_proven": count("Proven"),
                "mc_violated": count("Falsified"),
                "mc_bounded": count("BoundedSafe"),
                "mc_inconclusive": count("Inconclusive") + count("Unsupported"),
                "mt_violated": [r.name for r in mt.requirements if r.violations],
                "mc_falsified": [x["name"] for x in mc if x["verdict"] == "Falsified"],
            }
            records.append(row)
            rows.append((name, label, row["requirements"], row["mt_notation"], row["mc_proven"],
                         row["mc_violated"], row["mc_bounded"], row["mc_inconclusive"]))
    print(_table(
        ("model", "variant", "#reqs", "MT violations", "MC proven", "MC violated",
         "MC bounded", "MC inconclusive"),
        rows,
    ))
    if settings["out"] is not None:
        _write_json(settings["out"], {**_meta(settings, "bench"),
                                      "config": {"runs": settings["runs"],
                                                 "iterations": settings["iterations"],
                                                 "kmax": cfg.k_max},
                                      "rows": records})
    return EXIT_OK


# -- argument parsing


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--job", help="TOML job file with default settings")
    common.add_argument("--out", help="output file (JSON); stdout when omitted")
    common.add_argument("--seed", type=int, help="base seed of all random choices")
    common.add_argument("--clamp", action="store_true", default=None,
                        help="truncate temporal windows at the end of the trace")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--model", help="model file or builtin:NAME[/FAULT]")
    model.add_argument("--reqs", help="requirements file (default: built-in requirements)")
    model.add_argument("--formula", help="single requirement given inline")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--runs", type=_positive_int)
    search.add_argument("--iterations", type=_positive_int)
    search.add_argument("--sigma-fraction", dest="sigma_fraction", type=float)
    search.add_argument("--jobs", type=_positive_int, help="worker processes")
    search.add_argument("--segments", type=_positive_int, help="input segments per run")
    search.add_argument("--nsteps", type=_positive_int, help="simulation steps")

    bmc = argparse.ArgumentParser(add_help=False)
    bmc.add_argument("--kmax", type=_positive_int, help="deepest BMC unrolling")
    bmc.add_argument("--induction-depth", dest="induction_depth", type=_positive_int)
    bmc.add_argument("--timeout", type=float, help="seconds per solver query")
    bmc.add_argument("--solver", help="solver command line (default: $STLF_SOLVER or 'z3 -in')")

    p = argparse.ArgumentParser(prog="stlf", description="STL monitoring, falsification and model checking")
    p.add_argument("--version", action="version", version=f"stlf {__version__}")
    sub = p.add_subparsers(dest="mode", required=True)

    m = sub.add_parser("monitor", parents=[common], help="robustness of requirements on a trace CSV")
    m.add_argument("trace", nargs="?", help="trace CSV file")
    m.add_argument("--reqs", help="requirements file")
    m.add_argument("--formula", help="single requirement given inline")
    m.add_argument("--start", type=int, help="sample index to evaluate at (default 0)")
    m.add_argument("--profile", action="store_true", help="also report robustness at every index")

    sub.add_parser("falsify", parents=[common, model, search], help="hill-climbing campaign")
    sub.add_parser("check", parents=[common, model, bmc], help="BMC and k-induction")
    sub.add_parser("bench", parents=[common, search, bmc], help="both engines over the built-in catalog")
    return p


COMMANDS = {"monitor": cmd_monitor, "falsify": cmd_falsify, "check": cmd_check, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = resolve_settings(args)
        settings["profile"] = getattr(args, "profile", False)
        return COMMANDS[args.mode](settings)
    except (UsageError, StlfError, ValueError, OSError) as exc:
        print(f"stlf {args.mode}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
