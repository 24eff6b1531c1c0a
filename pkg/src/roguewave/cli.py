"""Command-line front end.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 admissibility failure under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import warnings

import numpy as np

from . import fv, shock
from .exceptions import (
    AdmissibilityError,
    BracketError,
    ConfigurationError,
    ConvergenceError,
    DomainError,
    NoSolutionError,
    SolverFailure,
    TrajectoryError,
)
from .model import check_admissibility
from .profiles import east_branch, profile_depth, west_branch
from .scenario import Scenario, load_scenario

log = logging.getLogger("roguewave")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ADMISSIBILITY = 0, 2, 3, 4
FV_HORIZON = 200.0

PROFILE_HEADER = ["x", "q", "m", "side"]
SIMULATE_HEADER = ["t", "x0", "ql", "qr", "amplitude", "ml", "mr", "shock_speed", "mass_rel_error"]
PHASE_HEADER = ["branch", "q", "m"]


def fmt(v) -> str:
    if isinstance(v, str):
        return v
    return f"{float(v):.10g}"


def write_csv(header, rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def _json_number(v):
    return v if math.isfinite(v) else None


def _admissibility(sc: Scenario, config, strict: bool):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        verdict = check_admissibility(config, sc.constants, strict=strict)
    for w in caught:
        log.warning("%s", w.message)
    return verdict


def cmd_setup(sc: Scenario, strict: bool = False) -> dict:
    config = sc.config()
    verdict = _admissibility(sc, config, strict or sc.strict_admissibility)
    return {
        "q_ref": config.q_ref,
        "q_p": config.q_p,
        "c_star": config.c_star,
        "c_ref": config.c_ref,
        "a_ref": config.a_ref,
        "m_ref": config.m_ref,
        "froude_ref": config.froude_ref,
        "lambda_min": verdict.lambda_min,
        "profile_extent": verdict.extent,
        "admissible": verdict.ok,
        "scenario_hash": sc.digest,
    }


def cmd_profile(sc: Scenario, t: float, x_min: float, x_max: float, dx: float):
    """Rows ``(x, q, m, side)`` of the analytic wave at time ``t``."""
    if not dx > 0 or x_max < x_min:
        raise DomainError("need dx > 0 and x_max >= x_min")
    config = sc.config()
    n = int(math.floor((x_max - x_min) / dx + 1e-9)) + 1
    x = x_min + dx * np.arange(n)
    if config.flat:
        return [(xi, config.q_star, 0.0, "E") for xi in x]
    x0 = shock.solve_shock_system(t, config).x0
    west = x < x0
    q = np.empty(n)
    if west.any():
        q[west] = profile_depth(x[west], t, west_branch(config), config)
    if (~west).any():
        q[~west] = profile_depth(x[~west], t, east_branch(config), config)
    m = np.where(west, config.west_line.flux(q), config.east_line.flux(q))
    return [(x[i], q[i], m[i], "W" if west[i] else "E") for i in range(n)]


def cmd_simulate(sc: Scenario, method: str = "system"):
    config = sc.config()
    rec = shock.simulate(
        sc.t_end, sc.dt, sc.output_times, config, x1=sc.x1, x2=sc.x2, method=method
    )
    rows = [
        (s.t, s.x0, s.q_l, s.q_r, s.amplitude, s.m_l, s.m_r, s.speed, s.mass_rel_error)
        for s in rec.states
    ]
    return rows, rec


def cmd_phase_plane(sc: Scenario, n: int):
    if n < 2:
        raise DomainError("n must be >= 2")
    config = sc.config()
    rows = []
    for q in np.linspace(config.q_0, config.q_ref, n):
        rows.append(("west", q, config.west_line.flux(q)))
    for q in np.linspace(config.q_star, config.q_p, n):
        rows.append(("east", q, config.east_line.flux(q)))
    for q_l, m_l, q_r, m_r in shock.rh_locus(n, config):
        rows.append(("locus_left", q_l, m_l))
        rows.append(("locus_right", q_r, m_r))
    return rows


def cmd_validate_fv(sc: Scenario, dx: float, cfl: float, t_end: float) -> dict:
    if t_end > FV_HORIZON:
        raise ConfigurationError(f"t_end <= {FV_HORIZON} violated (t_end={t_end})")
    if not dx > 0:
        raise ConfigurationError("dx must be positive")
    config = sc.config()
    study = fv.convergence_study(config, dx, cfl, t_end)
    return {
        "scenario_hash": sc.digest,
        "t_end": t_end,
        "cfl": cfl,
        "x_left": study["x_left"],
        "x_right": study["x_right"],
        "runs": [{k: _json_number(v) if isinstance(v, float) else v for k, v in r.items()}
                 for r in study["runs"]],
        "l1_order": _json_number(study["l1_order"]),
        "max_step_mass_defect": max(r["max_step_mass_defect"] for r in study["runs"]),
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="roguewave", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--scenario", required=True, help="scenario JSON file")
        sp.add_argument("--output", "-o", help="output file (default: stdout)")
        sp.add_argument("--strict", action="store_true", help="fail on admissibility warnings")

    sp = sub.add_parser("setup", help="resolve the scenario and print a JSON summary")
    common(sp)
    sp = sub.add_parser("profile", help="CSV of the wave at one time")
    common(sp)
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("--x-min", type=float, required=True)
    sp.add_argument("--x-max", type=float, required=True)
    sp.add_argument("--dx", type=float, default=10.0)
    sp = sub.add_parser("simulate", help="CSV time series of the shock")
    common(sp)
    sp.add_argument("--method", choices=("system", "mass"), default="system")
    sp = sub.add_parser("phase-plane", help="CSV of wave lines and shock locus")
    common(sp)
    sp.add_argument("--n", type=int, default=50)
    sp = sub.add_parser("validate-fv", help="finite-volume cross-check report (JSON)")
    common(sp)
    sp.add_argument("--dx", type=float, default=10.0)
    sp.add_argument("--cfl", type=float, default=0.5)
    sp.add_argument("--t-end", type=float, default=100.0)
    return p


def _run(args) -> str:
    sc = load_scenario(args.scenario, allow_flat=args.command == "validate-fv")
    if args.command != "setup":
        _admissibility(sc, sc.config(), args.strict or sc.strict_admissibility)
    buf = io.StringIO()
    if args.command == "setup":
        json.dump(cmd_setup(sc, strict=args.strict), buf, indent=2)
        buf.write("\n")
    elif args.command == "profile":
        write_csv(PROFILE_HEADER, cmd_profile(sc, args.t, args.x_min, args.x_max, args.dx), buf)
    elif args.command == "simulate":
        rows, rec = cmd_simulate(sc, method=args.method)
        write_csv(SIMULATE_HEADER, rows, buf)
        if rec.collapsed:
            log.info("shock reached the end of its locus at t=%s", rec.collapse_time)
    elif args.command == "phase-plane":
        write_csv(PHASE_HEADER, cmd_phase_plane(sc, args.n), buf)
    elif args.command == "validate-fv":
        json.dump(cmd_validate_fv(sc, args.dx, args.cfl, args.t_end), buf, indent=2)
        buf.write("\n")
    return buf.getvalue()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        text = _run(args)
    except AdmissibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ADMISSIBILITY
    except (ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoSolutionError, ConvergenceError, SolverFailure, BracketError, TrajectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
