"""Command-line interface.

Subcommands: bounds, dist, oracle, svm, export-sdpa.  Exit codes: 0 on
success, 1 on input errors, 2 when the solver failed to converge.  The
RRF_LOG environment variable (error|info|debug) controls log verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import __version__
from ._backend import backend_name
from .bounds import rrf_bounds, rrf_exact_lp
from .errors import RrfError
from .io import (
    canonical_json,
    export_sdpa,
    ingest_csv,
    parse_problem,
    problem_hash,
    write_text_atomic,
)
from .model import NonnegOrthant, UncertaintyRadii, natural_base
from .oracle import OracleConfig, is_robust_feasible, rrf_estimate
from .solver import SolverConfig, epigraph_distance
from .svm import separability_radius

log = logging.getLogger("rrfcone")

_LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging() -> None:
    level = os.environ.get("RRF_LOG", "error").lower()
    logging.basicConfig(level=_LOG_LEVELS.get(level, logging.ERROR))


def _solver_cfg(args) -> SolverConfig:
    return SolverConfig(gap_tol=args.tol, max_iters=args.max_iters)


def _oracle_cfg(args) -> OracleConfig:
    return OracleConfig(x_grid=args.grid, seed=args.seed)


def _emit(args, text: str) -> None:
    if args.out:
        write_text_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _float(x) -> float:
    return float(x)


def _cmd_bounds(args) -> int:
    with open(args.problem, "r", encoding="utf-8") as fh:
        p = parse_problem(fh.read())
    cfg = _solver_cfg(args)
    report = (
        rrf_exact_lp(p, cfg) if isinstance(p.cone, NonnegOrthant) else rrf_bounds(p, cfg)
    )
    doc = {
        "tool": "rrfcone",
        "version": __version__,
        "command": "bounds",
        "backend": backend_name(),
        "input_sha256": problem_hash(p),
        "base_kind": report.base_kind,
        "c1": _float(report.c1),
        "c2": _float(report.c2),
        "dist_lo": _float(report.dist_lo),
        "dist_hi": _float(report.dist_hi),
        "rrf_lower": _float(report.rrf_lower),
        "rrf_upper": _float(report.rrf_upper),
        "exact": report.exact,
        "iterations": report.iterations,
        "converged": report.converged,
        "gap_tol": _float(cfg.gap_tol),
        "diagnostic": report.diagnostic,
    }
    if args.output == "json":
        _emit(args, canonical_json(doc))
    else:
        lines = [
            f"radius bounds ({report.base_kind} base, m={p.m}, n={p.n})",
            f"  c1 = {report.c1:.12g}   c2 = {report.c2:.12g}",
            f"  dist in [{report.dist_lo:.12g}, {report.dist_hi:.12g}]",
            f"  rrf  in [{report.rrf_lower:.12g}, {report.rrf_upper:.12g}]"
            + ("   (exact)" if report.exact else ""),
        ]
        if report.exact:
            lines.append(f"  value = {0.5 * (report.rrf_lower + report.rrf_upper):.12g}")
        if report.diagnostic:
            lines.append(f"  note: {report.diagnostic}")
        _emit(args, "\n".join(lines) + "\n")
    return 0 if report.converged else 2


def _cmd_dist(args) -> int:
    with open(args.problem, "r", encoding="utf-8") as fh:
        p = parse_problem(fh.read())
    cfg = _solver_cfg(args)
    res = epigraph_distance(p, natural_base(p.cone), cfg)
    doc = {
        "tool": "rrfcone",
        "version": __version__,
        "command": "dist",
        "backend": backend_name(),
        "input_sha256": problem_hash(p),
        "dist_lo": _float(res.dist_lo),
        "dist_hi": _float(res.dist_hi),
        "f_lo": _float(res.f_lo),
        "f_hi": _float(res.f_hi),
        "lambda_star": [_float(v) for v in res.lambda_star],
        "iterations": res.iterations,
        "converged": res.converged,
        "gap_tol": _float(cfg.gap_tol),
    }
    if args.output == "json":
        _emit(args, canonical_json(doc))
    else:
        _emit(
            args,
            f"dist in [{res.dist_lo:.12g}, {res.dist_hi:.12g}] "
            f"({res.iterations} iterations, converged={res.converged})\n",
        )
    return 0 if res.converged else 2


def _cmd_oracle(args) -> int:
    with open(args.problem, "r", encoding="utf-8") as fh:
        p = parse_problem(fh.read())
    cfg = _oracle_cfg(args)
    doc = {
        "tool": "rrfcone",
        "version": __version__,
        "command": "oracle",
        "input_sha256": problem_hash(p),
    }
    if args.estimate:
        est = rrf_estimate(p, cfg)
        doc.update(
            {
                "rho_hat": _float(est.rho_hat),
                "bracket": [_float(est.bracket[0]), _float(est.bracket[1])],
                "alpha_lower_grid": None
                if est.alpha_lower_grid is None
                else _float(est.alpha_lower_grid),
            }
        )
        text = (
            f"rho_hat = {est.rho_hat:.6g} "
            f"(bracket [{est.bracket[0]:.6g}, {est.bracket[1]:.6g}])\n"
        )
    else:
        radii = np.array([float(v) for v in args.r.split(",")])
        verdict = is_robust_feasible(p, UncertaintyRadii(radii), cfg)
        doc.update(
            {
                "r": [_float(v) for v in radii],
                "status": verdict.status.value,
                "margin": _float(verdict.margin),
                "exact": verdict.exact,
                "witness": None if verdict.x is None else [_float(v) for v in verdict.x],
            }
        )
        text = f"{verdict.status.value} (margin {verdict.margin:.6g})\n"
    if args.output == "json":
        _emit(args, canonical_json(doc))
    else:
        _emit(args, text)
    return 0


def _cmd_svm(args) -> int:
    data = ingest_csv(args.data)
    cfg = _solver_cfg(args)
    res = separability_radius(data, cfg)
    doc = {
        "tool": "rrfcone",
        "version": __version__,
        "command": "svm",
        "backend": backend_name(),
        "points": int(data.m),
        "feature_dim": int(data.s),
        "r_star_lo": _float(res.r_star_lo),
        "lifted_dist_lo": _float(res.lifted_dist.dist_lo),
        "lifted_dist_hi": _float(res.lifted_dist.dist_hi),
        "lifted_rrf_upper": _float(res.lifted_rrf_upper),
        "iterations": res.lifted_dist.iterations,
        "converged": res.lifted_dist.converged,
    }
    if args.output == "json":
        _emit(args, canonical_json(doc))
    else:
        _emit(
            args,
            f"robust separability guaranteed for r <= {res.r_star_lo:.12g}\n"
            f"  lifted dist in [{res.lifted_dist.dist_lo:.12g}, "
            f"{res.lifted_dist.dist_hi:.12g}]\n",
        )
    return 0 if res.lifted_dist.converged else 2


def _cmd_export_sdpa(args) -> int:
    with open(args.problem, "r", encoding="utf-8") as fh:
        p = parse_problem(fh.read())
    _emit(args, export_sdpa(p, name=os.path.basename(args.problem)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rrfcone",
        description="Certified bounds for the radius of robust feasibility",
    )
    parser.add_argument("--version", action="version", version=f"rrfcone {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, solver=True, oracle=False):
        sp.add_argument("--output", choices=("json", "text"), default="text")
        sp.add_argument("--out", default=None, help="write the report to a file")
        if solver:
            sp.add_argument("--tol", type=float, default=1e-8, help="Frank-Wolfe gap tolerance")
            sp.add_argument("--max-iters", type=int, default=50_000)
        if oracle:
            sp.add_argument("--grid", type=int, default=201, help="grid points per axis")
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("bounds", help="radius bounds (exact for LP cones)")
    sp.add_argument("problem")
    add_common(sp)
    sp.set_defaults(fn=_cmd_bounds)

    sp = sub.add_parser("dist", help="epigraph distance interval")
    sp.add_argument("problem")
    add_common(sp)
    sp.set_defaults(fn=_cmd_dist)

    sp = sub.add_parser("oracle", help="brute-force feasibility probe / estimate")
    sp.add_argument("problem")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--r", help="comma-separated radii")
    group.add_argument("--estimate", action="store_true")
    add_common(sp, solver=False, oracle=True)
    sp.set_defaults(fn=_cmd_oracle)

    sp = sub.add_parser("svm", help="robust separability radius from CSV data")
    sp.add_argument("data")
    add_common(sp)
    sp.set_defaults(fn=_cmd_svm)

    sp = sub.add_parser("export-sdpa", help="emit the SDPA sparse distance program")
    sp.add_argument("problem")
    add_common(sp, solver=False)
    sp.set_defaults(fn=_cmd_export_sdpa)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (RrfError, OSError, ValueError) as exc:
        log.debug("failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
