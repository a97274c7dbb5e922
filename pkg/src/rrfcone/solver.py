"""Distance from the origin to the epigraphical set of the problem.

For a base point lam the nearest epigraph member has squared norm

    f(lam) = |A^T lam|^2 + max(-b^T lam, 0)^2,

so the distance is sqrt(min over the base of f).  The minimization runs
plain Frank-Wolfe with exact piecewise-quadratic line search; the linear
gap grad . (lam - s) certifies a two-sided interval around the optimum at
every iterate.  The iteration loop is the hot kernel: a compiled twin is
used when available (see _backend), with this module's numpy loop as the
reference fallback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import DimensionMismatch
from .geometry import lmo, membership
from .model import CompactBaseSpec, NominalProblem, validate_problem

__all__ = [
    "SolverConfig",
    "DistanceResult",
    "reduced_objective",
    "exact_line_search",
    "epigraph_distance",
]


@dataclass(frozen=True)
class SolverConfig:
    """Frank-Wolfe controls; gap_tol certifies the squared objective."""

    gap_tol: float = 1e-8
    max_iters: int = 50_000
    line_search: str = "exact-piecewise-quadratic"

    def __post_init__(self):
        if self.gap_tol <= 0:
            raise DimensionMismatch("gap_tol must be positive")
        if self.max_iters < 1:
            raise DimensionMismatch("max_iters must be >= 1")
        if self.line_search != "exact-piecewise-quadratic":
            raise DimensionMismatch("only exact line search is supported")


@dataclass(frozen=True)
class DistanceResult:
    """Certified interval for the epigraph distance.

    f_hi is the best objective value found, f_lo subtracts the final
    Frank-Wolfe gap (clamped at zero), and the optimum is guaranteed to lie
    in [f_lo, f_hi] by convexity.  lambda_star witnesses f_hi.
    """

    f_hi: float
    f_lo: float
    lambda_star: np.ndarray
    iterations: int
    converged: bool
    dist_lo: float = field(init=False)
    dist_hi: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dist_lo", math.sqrt(max(self.f_lo, 0.0)))
        object.__setattr__(self, "dist_hi", math.sqrt(max(self.f_hi, 0.0)))


def reduced_objective(p: NominalProblem, lam: np.ndarray) -> tuple[float, np.ndarray]:
    """Objective f(lam) = |A^T lam|^2 + max(-b^T lam, 0)^2 and its gradient.

    f is convex and continuously differentiable; the hinge term's square
    keeps the gradient continuous across the kink.
    """
    lam = np.ravel(np.asarray(lam, dtype=float))
    if lam.shape[0] != p.m:
        raise DimensionMismatch(f"lambda has length {lam.shape[0]}, expected {p.m}")
    u = p.a_bar.T @ lam
    hinge = max(-float(p.b_bar @ lam), 0.0)
    f = float(u @ u) + hinge * hinge
    grad = 2.0 * (p.a_bar @ u) - 2.0 * hinge * p.b_bar
    return f, grad


def exact_line_search(
    p: NominalProblem, lam: np.ndarray, d: np.ndarray, gamma_max: float = 1.0
) -> float:
    """Minimizer of f along lam + gamma*d for gamma in [0, gamma_max].

    The restriction is piecewise quadratic with at most one breakpoint
    (where b^T(lam + gamma*d) crosses zero); the candidates are the
    endpoints, the breakpoint, and each piece's unconstrained vertex.
    """
    lam = np.ravel(np.asarray(lam, dtype=float))
    d = np.ravel(np.asarray(d, dtype=float))
    u = p.a_bar.T @ lam
    v = p.a_bar.T @ d
    hp = -float(p.b_bar @ lam)
    hq = -float(p.b_bar @ d)
    return _best_step(float(u @ u), float(u @ v), float(v @ v), hp, hq, gamma_max)


def _best_step(uu: float, uv: float, vv: float, hp: float, hq: float, gmax: float) -> float:
    def phi(g: float) -> float:
        h = hp + hq * g
        val = uu + 2.0 * uv * g + vv * g * g
        if h > 0.0:
            val += h * h
        return val

    candidates = [0.0, gmax]
    if hq != 0.0:
        gb = -hp / hq
        if 0.0 < gb < gmax:
            candidates.append(gb)
    if vv > 0.0:
        g0 = -uv / vv
        if 0.0 < g0 < gmax:
            candidates.append(g0)
    denom = vv + hq * hq
    if denom > 0.0:
        g1 = -(uv + hp * hq) / denom
        if 0.0 < g1 < gmax:
            candidates.append(g1)
    best_g, best_val = 0.0, phi(0.0)
    for g in candidates[1:]:
        val = phi(g)
        if val < best_val:
            best_g, best_val = g, val
    return best_g


def _fast_lmo(base: CompactBaseSpec):
    # Per-kind closure equivalent to geometry.lmo, minus per-call dispatch
    # and validation; the iteration loop calls it tens of thousands of times.
    from .geometry import eigh as _eigh
    from .model import BaseKind, smat as _smat, svec as _svec

    m, mu = base.dim, base.scale
    kind = base.kind
    if kind is BaseKind.SIMPLEX:

        def f(c):
            out = np.zeros(m)
            out[int(np.argmin(c))] = mu
            return out

    elif kind is BaseKind.SOC_SLICE:

        def f(c):
            out = np.zeros(m)
            head = c[: m - 1]
            nrm = math.sqrt(float(head @ head))
            if nrm > 1e-14:
                out[: m - 1] = (-mu / nrm) * head
            out[m - 1] = mu
            return out

    elif kind is BaseKind.SPECTRAPLEX:

        def f(c):
            _, vecs = _eigh(_smat(c))
            v = vecs[:, 0]
            return mu * _svec(np.outer(v, v))

    else:
        s = base.s

        def f(c):
            out = np.zeros(m)
            head = c[:s]
            nrm = math.sqrt(float(head @ head))
            reduced = c[s:].copy()
            reduced[0] -= nrm
            slot = int(np.argmin(reduced))
            if slot == 0:
                if nrm > 1e-14:
                    out[:s] = (-mu / nrm) * head
                out[s] = mu
            else:
                out[s + slot] = mu
            return out

    return f


def _fw_python(
    a: np.ndarray, b: np.ndarray, base: CompactBaseSpec, gap_tol: float, max_iters: int
) -> tuple[float, float, np.ndarray, int, bool]:
    base_lmo = _fast_lmo(base)
    at = np.ascontiguousarray(a.T)
    lam = base_lmo(np.zeros(base.dim))
    f = 0.0
    gap = 0.0
    iters = 0
    converged = False
    for k in range(max_iters + 1):
        u = at @ lam
        hinge = max(-float(b @ lam), 0.0)
        f = float(u @ u) + hinge * hinge
        grad = 2.0 * (a @ u) - 2.0 * hinge * b
        s = base_lmo(grad)
        gap = max(float(grad @ (lam - s)), 0.0)
        iters = k
        if gap <= gap_tol:
            converged = True
            break
        if k == max_iters:
            break
        d = s - lam
        v = at @ d
        hq = -float(b @ d)
        step = _best_step(float(u @ u), float(u @ v), float(v @ v), -float(b @ lam), hq, 1.0)
        lam = lam + step * d
    return f, gap, lam, iters, converged


def epigraph_distance(
    p: NominalProblem, base: CompactBaseSpec, cfg: SolverConfig | None = None
) -> DistanceResult:
    """Certified two-sided interval for the epigraph distance.

    Runs Frank-Wolfe from the deterministic start lmo(base, 0); on hitting
    max_iters the result is still returned with converged=False and a valid
    (wider) interval.
    """
    cfg = cfg or SolverConfig()
    validate_problem(p)
    if base.dim != p.m:
        raise DimensionMismatch(
            f"base dimension {base.dim} does not match problem rows {p.m}"
        )
    f_hi, gap, lam, iters, converged = _backend.fw_solve(
        p.a_bar, p.b_bar, base, cfg.gap_tol, cfg.max_iters, fallback=_fw_python
    )
    f_lo = max(f_hi - gap, 0.0)
    result = DistanceResult(
        f_hi=f_hi,
        f_lo=f_lo,
        lambda_star=lam,
        iterations=iters,
        converged=converged,
    )
    assert membership(base, lam, 1e-8)
    return result
