"""Brute-force verification oracle.

Everything here re-derives robust feasibility from first principles: the
worst case of one dual multiplier over the perturbation balls is evaluated
in closed form, the supremum over the base is taken exactly for the simplex
(finitely many extreme points) and by sampling plus projected ascent for
the continuous bases, and the outer search over decision vectors is a grid
scan with coordinate-descent refinement.  This path shares no code with
the Frank-Wolfe solver, so agreement between the two is meaningful.

Desk-scale guard: the outer search refuses more than three decision
variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, DimensionTooLarge, RrfError
from .geometry import project, sample_extreme
from .model import (
    BaseKind,
    CompactBaseSpec,
    NominalProblem,
    UncertaintyRadii,
    natural_base,
    validate_problem,
)

__all__ = [
    "OracleConfig",
    "FeasibilityStatus",
    "FeasibilityVerdict",
    "RrfEstimate",
    "worst_case_margin",
    "is_robust_feasible",
    "rrf_estimate",
    "slater_margin",
    "admissibility_probe",
]

_FEAS_TOL = 1e-9
_CHUNK = 8192


@dataclass(frozen=True)
class OracleConfig:
    x_box: float = 10.0
    x_grid: int = 201
    refine_iters: int = 3
    lambda_samples: int = 512
    seed: int = 0
    bisect_tol: float = 1e-3

    def __post_init__(self):
        if min(self.x_box, self.x_grid, self.refine_iters, self.lambda_samples) <= 0:
            raise DimensionMismatch("oracle parameters must be positive")
        if self.bisect_tol <= 0:
            raise DimensionMismatch("bisect_tol must be positive")
        if self.x_grid % 2 == 0:
            raise DimensionMismatch("x_grid must be odd so 0 is a grid point")


class FeasibilityStatus(Enum):
    FEASIBLE_WITNESS = "feasible_witness"
    LIKELY_INFEASIBLE = "likely_infeasible"
    CERTIFIED_INFEASIBLE = "certified_infeasible"


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of one robust-feasibility probe.

    exact is True when the inner supremum over the base was evaluated over
    all extreme points (simplex); sampled bases never certify infeasibility.
    """

    status: FeasibilityStatus
    x: np.ndarray | None
    margin: float
    exact: bool

    @property
    def feasible(self) -> bool:
        return self.status is FeasibilityStatus.FEASIBLE_WITNESS


@dataclass(frozen=True)
class RrfEstimate:
    rho_hat: float
    bracket: tuple[float, float]
    alpha_lower_grid: float | None


# ---------------------------------------------------------------------------
# Worst-case margins.


def worst_case_margin(
    p: NominalProblem,
    x: np.ndarray,
    r: UncertaintyRadii,
    lam_set,
) -> float:
    """max over the given multipliers of the exact ball worst case.

    For one multiplier lam the supremum of lam^T(A x + b) over all row
    perturbations of sizes r is lam^T(Abar x + bbar) + (sum_i |lam_i| r_i)
    * |(x, 1)|; robust feasibility of x is equivalent to this being <= 0
    for every lam in the base.
    """
    x = np.ravel(np.asarray(x, dtype=float))
    if x.shape[0] != p.n:
        raise DimensionMismatch(f"x has length {x.shape[0]}, expected {p.n}")
    lam_mat = np.atleast_2d(np.asarray(lam_set, dtype=float))
    if lam_mat.size == 0:
        raise DimensionMismatch("lam_set must be nonempty")
    if lam_mat.shape[1] != p.m:
        raise DimensionMismatch("multiplier length does not match problem rows")
    row = p.a_bar @ x + p.b_bar
    xnorm = float(np.sqrt(1.0 + x @ x))
    vals = lam_mat @ row + (np.abs(lam_mat) @ r.r) * xnorm
    return float(np.max(vals))


class _MarginOracle:
    """Vectorized sup over the base of the perturbed multiplier value."""

    def __init__(self, p: NominalProblem, base: CompactBaseSpec, r: np.ndarray, cfg: OracleConfig):
        self.p = p
        self.base = base
        self.r = r
        self.exact = base.kind is BaseKind.SIMPLEX
        if self.exact:
            self.lam_mat = base.scale * np.eye(p.m)
        else:
            self.lam_mat = np.asarray(sample_extreme(base, cfg.seed, cfg.lambda_samples))
        self.pert = np.abs(self.lam_mat) @ r

    def margins(self, pts: np.ndarray) -> np.ndarray:
        """Sampled sup margin for each decision point (rows of pts)."""
        rows = pts @ self.p.a_bar.T + self.p.b_bar
        norms = np.sqrt(1.0 + np.einsum("ij,ij->i", pts, pts))
        vals = rows @ self.lam_mat.T + norms[:, None] * self.pert[None, :]
        return vals.max(axis=1)

    def refined_margin(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        """Margin at one point, with projected-ascent polish of the multiplier."""
        row = self.p.a_bar @ x + self.p.b_bar
        xnorm = float(np.sqrt(1.0 + x @ x))

        def value(lam: np.ndarray) -> float:
            return float(lam @ row + (np.abs(lam) @ self.r) * xnorm)

        vals = self.lam_mat @ row + self.pert * xnorm
        best_idx = int(np.argmax(vals))
        lam = self.lam_mat[best_idx].copy()
        best = float(vals[best_idx])
        if self.exact:
            return best, lam
        eta = 1.0
        for _ in range(40):
            grad = row + np.sign(lam) * self.r * xnorm
            cand = project(self.base, lam + eta * grad)
            cval = value(cand)
            if cval > best + 1e-14:
                lam, best = cand, cval
            else:
                eta *= 0.5
                if eta < 1e-8:
                    break
        return best, lam


def _sup_linear(base: CompactBaseSpec, rows: np.ndarray) -> np.ndarray:
    """Exact sup of lam^T row over the base (linear, so closed form)."""
    mu = base.scale
    m = base.dim
    if base.kind is BaseKind.SIMPLEX:
        return mu * rows.max(axis=1)
    if base.kind is BaseKind.SOC_SLICE:
        return mu * (np.linalg.norm(rows[:, : m - 1], axis=1) + rows[:, m - 1])
    if base.kind is BaseKind.SPECTRAPLEX:
        from .model import smat

        mats = np.stack([smat(row) for row in rows])
        return mu * np.linalg.eigvalsh(mats)[:, -1]
    if base.kind is BaseKind.SVM_PRODUCT:
        s = base.s
        soc_val = np.linalg.norm(rows[:, :s], axis=1) + rows[:, s]
        orth_val = rows[:, s + 1 :].max(axis=1) if base.m_svm else -np.inf
        return mu * np.maximum(soc_val, orth_val)
    raise DimensionMismatch(f"unknown base kind {base.kind}")


# ---------------------------------------------------------------------------
# Outer grid search.


def _axes(cfg: OracleConfig, n: int) -> list[np.ndarray]:
    return [np.linspace(-cfg.x_box, cfg.x_box, cfg.x_grid) for _ in range(n)]


def _iter_grid(axes: list[np.ndarray]):
    n = len(axes)
    if n == 1:
        yield axes[0][:, None]
        return
    mesh = np.meshgrid(*axes[1:], indexing="ij")
    tail = np.stack([m.ravel() for m in mesh], axis=1)
    block = max(1, _CHUNK // tail.shape[0])
    first = axes[0]
    for start in range(0, first.size, block):
        sub = first[start : start + block]
        pts = np.empty((sub.size * tail.shape[0], n))
        pts[:, 0] = np.repeat(sub, tail.shape[0])
        pts[:, 1:] = np.tile(tail, (sub.size, 1))
        yield pts


def _grid_min(fn, axes: list[np.ndarray]) -> tuple[float, np.ndarray]:
    best_val = np.inf
    best_x = None
    for pts in _iter_grid(axes):
        vals = fn(pts)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_x = pts[i].copy()
    return best_val, best_x


def _coord_refine(fn, x0: np.ndarray, halfwidth: float, passes: int) -> np.ndarray:
    x = x0.copy()
    n = x.size
    for _ in range(passes):
        for j in range(n):
            h = halfwidth
            for _ in range(3):
                offsets = np.linspace(-h, h, 21)
                pts = np.tile(x, (offsets.size, 1))
                pts[:, j] += offsets
                vals = fn(pts)
                x = pts[int(np.argmin(vals))].copy()
                h /= 10.0
    return x


def _guard(p: NominalProblem) -> None:
    if p.n > 3:
        raise DimensionTooLarge("oracle grid search is limited to n <= 3")


# ---------------------------------------------------------------------------
# Public probes.


def is_robust_feasible(
    p: NominalProblem, r: UncertaintyRadii, cfg: OracleConfig | None = None
) -> FeasibilityVerdict:
    """Search the decision box for a robust-feasibility witness.

    A refined margin <= 1e-9 yields a witness.  Otherwise the verdict is
    LIKELY_INFEASIBLE: without a covering argument the grid cannot certify
    a continuous minimum, and sampled bases only ever under-estimate the
    supremum.
    """
    cfg = cfg or OracleConfig()
    validate_problem(p)
    _guard(p)
    if r.r.shape[0] != p.m:
        raise DimensionMismatch("radii length does not match problem rows")
    base = natural_base(p.cone)
    oracle = _MarginOracle(p, base, r.r, cfg)
    axes = _axes(cfg, p.n)
    spacing = axes[0][1] - axes[0][0] if cfg.x_grid > 1 else cfg.x_box
    _, x = _grid_min(oracle.margins, axes)
    for _ in range(3):
        x = _coord_refine(oracle.margins, x, spacing, cfg.refine_iters)
        margin, lam = oracle.refined_margin(x)
        if oracle.exact or margin <= float(oracle.margins(x[None, :])[0]) + 1e-12:
            break
        # Ascent found a harsher multiplier: remember it and re-refine x.
        oracle.lam_mat = np.vstack([oracle.lam_mat, lam])
        oracle.pert = np.append(oracle.pert, np.abs(lam) @ r.r)
    if margin <= _FEAS_TOL:
        return FeasibilityVerdict(FeasibilityStatus.FEASIBLE_WITNESS, x, margin, oracle.exact)
    return FeasibilityVerdict(FeasibilityStatus.LIKELY_INFEASIBLE, None, margin, oracle.exact)


def slater_margin(p: NominalProblem, cfg: OracleConfig | None = None) -> float:
    """min over the box of the exact sup of lam^T(A x + b) over the base.

    Strictly negative values witness strict feasibility, which in turn
    forces a positive radius.
    """
    cfg = cfg or OracleConfig()
    validate_problem(p)
    _guard(p)
    base = natural_base(p.cone)

    def fn(pts: np.ndarray) -> np.ndarray:
        rows = pts @ p.a_bar.T + p.b_bar
        return _sup_linear(base, rows)

    axes = _axes(cfg, p.n)
    spacing = axes[0][1] - axes[0][0] if cfg.x_grid > 1 else cfg.x_box
    _, x = _grid_min(fn, axes)
    x = _coord_refine(fn, x, spacing, cfg.refine_iters)
    return float(fn(x[None, :])[0])


def rrf_estimate(p: NominalProblem, cfg: OracleConfig | None = None) -> RrfEstimate:
    """Bisection estimate of the radius, with a closed-form grid lower pass.

    Doubles the scalar radius from 1 until infeasible (cap 2**10), bisects
    to bisect_tol, and, when the nominal problem is strictly feasible
    somewhere on the grid, also evaluates the per-point critical radius
    min over multipliers of -lam^T(A x + b) / (|lam|_1 |(x, 1)|) and keeps
    the grid maximum as a lower estimate (exact for the simplex, where it
    tightens the bracket).
    """
    cfg = cfg or OracleConfig()
    validate_problem(p)
    _guard(p)
    m = p.m

    def feasible(alpha: float) -> bool:
        return is_robust_feasible(p, UncertaintyRadii.uniform(alpha, m), cfg).feasible

    if not feasible(0.0):
        return RrfEstimate(0.0, (0.0, 0.0), None)
    lo, hi = 0.0, 1.0
    while feasible(hi):
        lo = hi
        hi *= 2.0
        if hi > 2.0**10:
            raise RrfError("radius estimate exceeds 2**10; doubling aborted")
    while hi - lo > cfg.bisect_tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid

    base = natural_base(p.cone)
    alpha_grid = _grid_alpha_lower(p, base, cfg)
    if alpha_grid is not None and base.kind is BaseKind.SIMPLEX:
        lo = max(lo, min(alpha_grid, hi))
    return RrfEstimate(0.5 * (lo + hi), (lo, hi), alpha_grid)


def _grid_alpha_lower(
    p: NominalProblem, base: CompactBaseSpec, cfg: OracleConfig
) -> float | None:
    lam_mat = (
        base.scale * np.eye(p.m)
        if base.kind is BaseKind.SIMPLEX
        else np.asarray(sample_extreme(base, cfg.seed, cfg.lambda_samples))
    )
    l1 = np.abs(lam_mat).sum(axis=1)
    best = -np.inf
    for pts in _iter_grid(_axes(cfg, p.n)):
        rows = pts @ p.a_bar.T + p.b_bar
        norms = np.sqrt(1.0 + np.einsum("ij,ij->i", pts, pts))
        ratios = -(rows @ lam_mat.T) / (norms[:, None] * l1[None, :])
        best = max(best, float(ratios.min(axis=1).max()))
    return best if best > 0.0 else None


def admissibility_probe(
    p: NominalProblem, r_list, cfg: OracleConfig | None = None
) -> list[FeasibilityVerdict]:
    """Batch feasibility probes for property checks over a radius lattice."""
    cfg = cfg or OracleConfig()
    out = []
    for r in r_list:
        if not isinstance(r, UncertaintyRadii):
            r = UncertaintyRadii(np.asarray(r, dtype=float))
        out.append(is_robust_feasible(p, r, cfg))
    return out
