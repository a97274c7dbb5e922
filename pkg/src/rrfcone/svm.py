"""Robust linear separability of labeled point sets.

A binary training set is separable with margin even when every point may
move inside a ball of radius r whenever r stays below a computable
threshold.  The threshold comes from lifting the margin constraints into a
conic system over (w, gamma, t) with a second-order head |w| <= t and one
orthant row per training point, then dividing the lifted epigraph distance
by sqrt(s) + 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadLabels, DimensionMismatch, NonFiniteEntry
from .model import (
    CompactBaseSpec,
    NominalProblem,
    ProductCone,
    validate_problem,
)
from .solver import DistanceResult, SolverConfig, epigraph_distance

__all__ = [
    "TrainingSet",
    "lift_svm",
    "separability_radius",
    "SeparabilityResult",
    "verify_separation",
]


@dataclass(frozen=True)
class TrainingSet:
    """Labeled points (u_i, alpha_i) with labels in {-1, +1}."""

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        labs = np.ravel(np.asarray(self.labels, dtype=float))
        if pts.shape[0] != labs.shape[0]:
            raise DimensionMismatch("one label per training point required")
        if pts.shape[0] < 2:
            raise DimensionMismatch("need at least two training points")
        if not np.all(np.isfinite(pts)):
            raise NonFiniteEntry("training points must be finite")
        if not np.all(np.isin(labs, (-1.0, 1.0))):
            raise BadLabels("labels must be -1 or +1")
        pts.setflags(write=False)
        labs.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labs)

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def s(self) -> int:
        return self.points.shape[1]


def lift_svm(t: TrainingSet) -> NominalProblem:
    """Conic lift of the margin constraints over x = (w, gamma, t).

    Rows 1..s pin -w_i, row s+1 pins -t (together the second-order head
    |w| <= t), and each training point contributes the row
    (-alpha_j u_j, -alpha_j, 0) with offset 1, i.e. alpha_j(u_j.w + gamma)
    >= 1.
    """
    s, m = t.s, t.m
    n = s + 2
    a = np.zeros((m + s + 1, n))
    b = np.zeros(m + s + 1)
    for i in range(s):
        a[i, i] = -1.0
    a[s, n - 1] = -1.0
    for j in range(m):
        a[s + 1 + j, :s] = -t.labels[j] * t.points[j]
        a[s + 1 + j, s] = -t.labels[j]
        b[s + 1 + j] = 1.0
    p = NominalProblem(a, b, ProductCone(soc_dim=s + 1, orthant_dim=m))
    return validate_problem(p)


@dataclass(frozen=True)
class SeparabilityResult:
    """Certified robust-separability radius (the guarantee endpoint).

    Separation with unit margin survives any per-point perturbation radius
    r <= r_star_lo.  The lifted radius interval is metadata only; its upper
    endpoint bounds the lifted system's radius, not the separability one.
    """

    r_star_lo: float
    lifted_dist: DistanceResult
    lifted_rrf_upper: float


def separability_radius(
    t: TrainingSet, cfg: SolverConfig | None = None
) -> SeparabilityResult:
    """Lower guarantee on the robust separability radius of the data."""
    p = lift_svm(t)
    base = CompactBaseSpec.svm_product(t.s, t.m)
    dist = epigraph_distance(p, base, cfg)
    denom = np.sqrt(t.s) + 1.0
    return SeparabilityResult(
        r_star_lo=dist.dist_lo / denom,
        lifted_dist=dist,
        lifted_rrf_upper=dist.dist_hi,
    )


def verify_separation(
    t: TrainingSet, r: float, witness: tuple[np.ndarray, float]
) -> bool:
    """Check a separator (w, gamma) against the exact ball worst case.

    True when alpha_i(u_i.w + gamma) - r|w| >= 1 - 1e-9 for every point.
    """
    if r < 0:
        raise DimensionMismatch("radius must be nonnegative")
    w = np.ravel(np.asarray(witness[0], dtype=float))
    gamma = float(witness[1])
    if w.shape[0] != t.s:
        raise DimensionMismatch("separator dimension does not match the data")
    margins = t.labels * (t.points @ w + gamma) - r * float(np.linalg.norm(w))
    return bool(np.all(margins >= 1.0 - 1e-9))
