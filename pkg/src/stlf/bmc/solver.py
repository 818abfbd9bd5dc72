"""External SMT solver, one process per query over stdin/stdout."""

from __future__ import annotations

import os
import shlex
import subprocess
from dataclasses import dataclass

from stlf.bmc.sexpr import parse_all, parse_model_values
from stlf.errors import SolverProtocolError, SolverUnavailable

DEFAULT_SOLVER = "z3 -in"
SOLVER_ENV = "STLF_SOLVER"


def solver_command(cmd=None) -> list[str]:
    """Explicit command, else ``$STLF_SOLVER``, else ``z3 -in``."""
    if cmd is None:
        cmd = os.environ.get(SOLVER_ENV) or DEFAULT_SOLVER
    return shlex.split(cmd) if isinstance(cmd, str) else list(cmd)


@dataclass(frozen=True)
class SolverAnswer:
    status: str  # "sat" | "unsat" | "unknown" | "timeout"
    values: dict  # symbol -> value, only for "sat"


def run_query(script: str, cmd=None, timeout: float | None = None) -> SolverAnswer:
    argv = solver_command(cmd)
    try:
        proc = subprocess.run(
            argv, input=script, capture_output=True, text=True, timeout=timeout, check=False
        )
    except FileNotFoundError:
        raise SolverUnavailable(f"solver {argv[0]!r} not found") from None
    except PermissionError as exc:
        raise SolverUnavailable(f"solver {argv[0]!r} cannot be run: {exc}") from None
    except subprocess.TimeoutExpired:
        return SolverAnswer("timeout", {})
    out = proc.stdout.strip()
    if not out:
        raise SolverProtocolError(
            f"solver produced no output (exit {proc.returncode}): {proc.stderr.strip()[:200]}"
        )
    status, _, rest = out.partition("\n")
    status = status.strip()
    if status.startswith("(error"):
        raise SolverProtocolError(f"solver rejected the script: {status}")
    if status not in ("sat", "unsat", "unknown"):
        raise SolverProtocolError(f"unexpected solver answer {status!r}")
    if status != "sat":
        return SolverAnswer(status, {})
    exprs = parse_all(rest)
    if not exprs or not isinstance(exprs[0], list):
        raise SolverProtocolError("solver answered sat but printed no model")
    return SolverAnswer("sat", parse_model_values(exprs[0]))
