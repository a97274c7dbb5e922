"""Radius bounds assembled from the epigraph distance and base constants.

The robust-feasibility radius of a validated problem lies between
c1 * dist and c2 * dist for the natural base of its cone; the linear
program case has c1 = c2 = 1 and is therefore exact.  Bound assembly is
deliberately conservative: the lower constant multiplies the certified
lower distance endpoint and the upper constant the upper endpoint, so the
reported interval contains the radius despite solver inexactness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WrongCone
from .geometry import base_constants
from .model import (
    CompactBaseSpec,
    NominalProblem,
    NonnegOrthant,
    natural_base,
    validate_problem,
)
from .solver import DistanceResult, SolverConfig, epigraph_distance

__all__ = ["RrfReport", "rrf_bounds", "rrf_exact_lp", "gap_ratio"]

VACUOUS_SLATER_NOTE = "bound vacuous at 0, Slater margin positive"
ZERO_NO_SLATER_NOTE = "lower bound 0; no strict-feasibility witness found"


@dataclass(frozen=True)
class RrfReport:
    """Bracketing interval [rrf_lower, rrf_upper] for the radius."""

    c1: float
    c2: float
    dist_lo: float
    dist_hi: float
    rrf_lower: float
    rrf_upper: float
    exact: bool
    base_kind: str
    iterations: int
    converged: bool
    diagnostic: str | None = None


def _assemble(
    base: CompactBaseSpec, dist: DistanceResult, diagnostic: str | None = None
) -> RrfReport:
    bc = base_constants(base)
    return RrfReport(
        c1=bc.c1,
        c2=bc.c2,
        dist_lo=dist.dist_lo,
        dist_hi=dist.dist_hi,
        rrf_lower=bc.c1 * dist.dist_lo,
        rrf_upper=bc.c2 * dist.dist_hi,
        exact=bool(bc.c1 == bc.c2 and dist.converged),
        base_kind=base.kind.value,
        iterations=dist.iterations,
        converged=dist.converged,
        diagnostic=diagnostic,
    )


def _zero_bound_diagnostic(p: NominalProblem) -> str | None:
    # The radius is provably positive under a strict-feasibility witness,
    # so a zero lower bound deserves a note either way.  Desk-scale only.
    if p.n > 3:
        return None
    from .oracle import OracleConfig, slater_margin

    margin = slater_margin(p, OracleConfig(x_grid=101, lambda_samples=64, seed=0))
    if margin < -1e-9:
        return VACUOUS_SLATER_NOTE
    return ZERO_NO_SLATER_NOTE


def rrf_bounds(
    p: NominalProblem,
    cfg: SolverConfig | None = None,
    base: CompactBaseSpec | None = None,
    diagnose: bool = True,
) -> RrfReport:
    """Radius bounds for the natural base of p's cone.

    A custom base (e.g. a rescaled one) may be passed; the final bounds are
    invariant under base rescaling.  When the lower bound degenerates to
    zero a diagnostic note records whether a strict-feasibility witness
    exists (in which case the radius is positive but the bound is vacuous).
    """
    validate_problem(p)
    base = base or natural_base(p.cone)
    dist = epigraph_distance(p, base, cfg)
    report = _assemble(base, dist)
    if diagnose and report.rrf_lower <= 1e-12:
        report = _assemble(base, dist, diagnostic=_zero_bound_diagnostic(p))
    return report


def rrf_exact_lp(p: NominalProblem, cfg: SolverConfig | None = None) -> RrfReport:
    """Exact radius interval for orthant-cone problems (c1 = c2 = 1).

    The distance interval itself is the radius interval.  Raises WrongCone
    for any other cone kind.
    """
    if not isinstance(p.cone, NonnegOrthant):
        raise WrongCone("exact formula applies to the nonnegative orthant only")
    return rrf_bounds(p, cfg)


def gap_ratio(base: CompactBaseSpec) -> float:
    """Ratio c1/c2 in (0, 1] between the lower and upper bound constants."""
    bc = base_constants(base)
    return bc.c1 / bc.c2
