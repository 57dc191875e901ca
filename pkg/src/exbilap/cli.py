"""Command-line front end.

Subcommands: solve-disk (ground-state scan at one parameter triple),
sweep (grid scan to CSV), verify (isoperimetric verification of a
domain file), ualpha (trial-energy table), oracle (cross-check of the
two independent radial references), profile (dump a converged radial
profile as plot-ready CSV).

Outputs are deterministic: repeated runs with identical inputs and
configuration produce byte-identical bytes.  JSON objects are emitted
with sorted keys; CSV uses a bare newline terminator and shortest
round-trip float formatting.

Exit codes: 0 success; 1 input or validation error; 2 no bound state
where one was required; 3 convergence failure.

An optional plain-text config file (`key = value` lines, keys rtol,
T0, N0, n_max, samples, max_doublings) supplies defaults; pass it via
--config or the EXBILAP_CONFIG environment variable.  Command-line
flags override config values.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .disk import (
    CLASS_NONE,
    SWEEP_COLUMNS,
    SolveControls,
    ground_state,
    solve_fiber,
    sweep,
    sweep_csv_rows,
)
from .errors import (
    BracketError,
    ConvergenceError,
    ExbilapError,
    FactorizationError,
    ParameterError,
    UnsupportedModeError,
    UnsupportedRegimeError,
)
from .fiber import FiberParams
from .reference import fd_lambda, secular_lambda, ualpha_energy
from .domain import DEFAULT_SAMPLES, read_domain
from .transplant import verify_isoperimetric

CONFIG_ENV = "EXBILAP_CONFIG"
CONFIG_KEYS = ("rtol", "T0", "N0", "n_max", "samples", "max_doublings")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_BOUND_STATE = 2
EXIT_CONVERGENCE = 3


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so exit codes stay ours."""

    def error(self, message):
        raise ParameterError(message)


def _parse_config(path) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"config line {lineno}: expected key = value")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in CONFIG_KEYS:
                raise ParameterError(f"config line {lineno}: unknown key {key!r}")
            values[key] = val
    out = {}
    try:
        if "rtol" in values:
            out["rtol"] = float(values["rtol"])
        if "T0" in values:
            out["T0"] = float(values["T0"])
        if "N0" in values:
            out["N0"] = float(values["N0"])
        if "n_max" in values:
            out["n_max"] = int(values["n_max"])
        if "samples" in values:
            out["samples"] = int(values["samples"])
        if "max_doublings" in values:
            out["max_doublings"] = int(values["max_doublings"])
    except ValueError as err:
        raise ParameterError(f"config value error: {err}")
    return out


def _load_config(args) -> dict:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    if not os.path.exists(path):
        raise ParameterError(f"config file not found: {path}")
    return _parse_config(path)


def _controls_from(args, cfg) -> SolveControls:
    def pick(flag, key, fallback):
        v = getattr(args, flag, None)
        if v is not None:
            return v
        return cfg.get(key, fallback)

    return SolveControls(
        rtol=pick("rtol", "rtol", 1e-6),
        t0=pick("t0", "T0", None),
        elems_per_unit=pick("n0", "N0", 40.0),
        max_doublings=int(pick("max_doublings", "max_doublings", 8)),
        atol=getattr(args, "atol", None) or 0.0,
    )


def _n_max_from(args, cfg) -> int:
    v = getattr(args, "n_max", None)
    if v is not None:
        return v
    return int(cfg.get("n_max", 3))


def _samples_from(args, cfg) -> int:
    v = getattr(args, "samples", None)
    if v is not None:
        return v
    return int(cfg.get("samples", DEFAULT_SAMPLES))


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _record_json(record) -> list:
    return [
        {"T": t, "N_elems": n, "lambda": lam}
        for (t, n, lam) in record
    ]


def _result_json(res) -> dict:
    if res is None:
        return {"lambda": None}
    t_final, n_final, _ = res.record[-1]
    return {
        "lambda": res.lam,
        "residual": res.residual,
        "residual_rel": res.residual_rel,
        "richardson": res.richardson,
        "converged": res.converged,
        "T_final": t_final,
        "N_elems_final": n_final,
        "record": _record_json(res.record),
    }


def _report_json(rep) -> dict:
    return {
        "tau": rep.tau,
        "gamma": rep.gamma,
        "radius": rep.radius,
        "classification": rep.classification,
        "n_star": rep.n_star,
        "lambda": rep.lam,
        "tolerance": rep.tol,
        "modes": {str(n): _result_json(rep.results[n]) for n in sorted(rep.results)},
    }


def _float_list(text: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ParameterError(f"expected a comma-separated number list, got {text!r}")


def _add_common(p, radius_required=True):
    p.add_argument("--tau", type=float, required=True, help="tension parameter, >= 0")
    p.add_argument("--gamma", type=float, required=True, help="boundary parameter")
    p.add_argument("--radius", type=float, required=radius_required, help="disk radius")


def _add_solver_flags(p):
    p.add_argument("--rtol", type=float, default=None, help="eigenvalue relative tolerance")
    p.add_argument("--t0", type=float, default=None, help="initial truncation length T0")
    p.add_argument("--n0", type=float, default=None, help="elements per unit length N0")
    p.add_argument("--max-doublings", dest="max_doublings", type=int, default=None)
    p.add_argument("--atol", type=float, default=None, help="absolute eigenvalue tolerance")
    p.add_argument("--n-max", dest="n_max", type=int, default=None, help="largest fiber mode")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="exbilap", description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=None, help="config file path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-disk", help="ground-state scan at one parameter triple")
    _add_common(p)
    _add_solver_flags(p)
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = sub.add_parser("sweep", help="ground-state scan over a parameter grid, CSV")
    p.add_argument("--tau", required=True, help="comma-separated tau values")
    p.add_argument("--gamma", required=True, help="comma-separated gamma values")
    p.add_argument("--radius", required=True, help="comma-separated radius values")
    _add_solver_flags(p)
    p.add_argument("--workers", type=int, default=None, help="concurrent grid points")
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="isoperimetric verification for a domain file")
    p.add_argument("--domain", required=True, help="domain definition file")
    _add_common(p)
    _add_solver_flags(p)
    p.add_argument("--samples", type=int, default=None, help="angular samples")
    p.add_argument("--out", default=None)

    p = sub.add_parser("ualpha", help="trial-function energies over an alpha grid, CSV")
    _add_common(p)
    p.add_argument("--alphas", required=True, help="comma-separated alpha values")
    p.add_argument("--out", default=None)

    p = sub.add_parser("oracle", help="secular vs finite-difference cross-check, JSON")
    _add_common(p)
    p.add_argument("--fd-h", dest="fd_h", type=float, default=0.02, help="FD step")
    p.add_argument("--fd-t", dest="fd_t", type=float, default=None, help="FD interval length")
    p.add_argument("--out", default=None)

    p = sub.add_parser("profile", help="dump a converged radial profile as (t, f, f') CSV")
    _add_common(p)
    _add_solver_flags(p)
    p.add_argument("--mode", type=int, default=0, help="fiber mode, default 0")
    p.add_argument("--out", default=None)
    return parser


def _cmd_solve_disk(args, cfg) -> int:
    controls = _controls_from(args, cfg)
    rep = ground_state(args.tau, args.gamma, args.radius, controls, _n_max_from(args, cfg))
    _emit(_json_dumps(_report_json(rep)), args.out)
    if rep.classification == CLASS_NONE:
        if args.gamma >= 0.0:
            sys.stderr.write("no negative bound state (gamma >= 0)\n")
        else:
            sys.stderr.write("no negative bound state found within the truncation budget\n")
        return EXIT_NO_BOUND_STATE
    return EXIT_OK


def _cmd_sweep(args, cfg) -> int:
    controls = _controls_from(args, cfg)
    rows = sweep(
        _float_list(args.tau),
        _float_list(args.gamma),
        _float_list(args.radius),
        controls,
        _n_max_from(args, cfg),
        workers=args.workers,
    )
    _emit(_csv_text(SWEEP_COLUMNS, sweep_csv_rows(rows)), args.out)
    return EXIT_OK


def _cmd_verify(args, cfg) -> int:
    controls = _controls_from(args, cfg)
    dom = read_domain(args.domain, _samples_from(args, cfg))
    rep = verify_isoperimetric(
        dom, args.tau, args.gamma, args.radius, controls, _n_max_from(args, cfg)
    )
    payload = {
        "tau": rep.tau,
        "gamma": rep.gamma,
        "radius": rep.radius,
        "verdict": rep.verdict,
        "quotient": rep.quotient,
        "lambda_disk": rep.lam_disk,
        "margin": rep.margin,
        "tolerance": rep.tol,
        "radial_ground_state": rep.radial,
        "constraints": {
            "curvature_margin": rep.margins.curvature_margin,
            "perimeter_excess": rep.margins.perimeter_excess,
            "congruent": rep.margins.congruent,
        },
        "ground": None if rep.ground is None else _report_json(rep.ground),
    }
    _emit(_json_dumps(payload), args.out)
    return EXIT_OK


def _cmd_ualpha(args, cfg) -> int:
    alphas = _float_list(args.alphas)
    if not alphas:
        raise ParameterError("alpha grid is empty")
    rows = [(a, ualpha_energy(a, args.tau, args.gamma, args.radius)) for a in alphas]
    _emit(_csv_text(("alpha", "energy"), rows), args.out)
    return EXIT_OK


def _cmd_oracle(args, cfg) -> int:
    params = FiberParams(args.tau, args.gamma, args.radius, 0)
    try:
        sec = secular_lambda(args.tau, args.gamma, args.radius)
    except UnsupportedRegimeError:
        sec = None
    fd = fd_lambda(params, h=args.fd_h, t=args.fd_t)
    if sec is not None and fd is not None:
        diff = abs(sec - fd)
        rel = diff / max(abs(sec), abs(fd))
    else:
        diff = rel = None
    payload = {
        "tau": args.tau,
        "gamma": args.gamma,
        "radius": args.radius,
        "secular": sec,
        "fd": fd,
        "abs_diff": diff,
        "rel_diff": rel,
    }
    _emit(_json_dumps(payload), args.out)
    return EXIT_OK


def _cmd_profile(args, cfg) -> int:
    controls = _controls_from(args, cfg)
    params = FiberParams(args.tau, args.gamma, args.radius, args.mode)
    res = solve_fiber(params, controls)
    if res is None:
        sys.stderr.write("no bound state in this fiber\n")
        return EXIT_NO_BOUND_STATE
    prof = res.profile
    t = prof.mesh.nodes - prof.mesh.left
    rows = list(zip(t.tolist(), prof.values.tolist(), prof.slopes.tolist()))
    _emit(_csv_text(("t", "f", "fprime"), rows), args.out)
    return EXIT_OK


_COMMANDS = {
    "solve-disk": _cmd_solve_disk,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "ualpha": _cmd_ualpha,
    "oracle": _cmd_oracle,
    "profile": _cmd_profile,
}


def run(argv) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _load_config(args)
        return _COMMANDS[args.command](args, cfg)
    except (ParameterError, UnsupportedModeError, UnsupportedRegimeError, OSError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_INPUT
    except (ConvergenceError, BracketError, FactorizationError) as err:
        sys.stderr.write(f"convergence failure: {err}\n")
        return EXIT_CONVERGENCE
    except ExbilapError as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_INPUT


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
