"""Geometry oracles for the compact bases.

Each base kind supports linear minimization (lmo), Euclidean projection,
membership testing, extreme-point sampling, and the l1-range / bound
constants that turn an epigraphical distance into radius bounds.  All
functions are pure; the sampler draws every random bit from its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DykstraNoConvergence, NoConvergence, NotSymmetric
from .model import BaseKind, CompactBaseSpec, smat, svec

__all__ = [
    "BaseConstants",
    "lmo",
    "project",
    "l1_extremes",
    "base_constants",
    "sample_extreme",
    "membership",
    "eigh",
    "project_simplex",
]

_ZERO_COST = 1e-14


@dataclass(frozen=True)
class BaseConstants:
    """Multipliers turning a distance into radius bounds.

    c1 = 1 / max over B of the l1 norm (exact when c1_exact, otherwise a
    proven lower-bound constant), c2 = 1 / (l1 lower bound over B).
    Always 0 < c1 <= c2.
    """

    c1: float
    c2: float
    c1_exact: bool


def _check_dim(base: CompactBaseSpec, v: np.ndarray) -> np.ndarray:
    v = np.ravel(np.asarray(v, dtype=float))
    if v.shape[0] != base.dim:
        raise DimensionMismatch(
            f"vector length {v.shape[0]} does not match base dimension {base.dim}"
        )
    return v


# ---------------------------------------------------------------------------
# Small dense symmetric eigensolver (cyclic Jacobi).


def eigh(mat: np.ndarray, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a small dense symmetric matrix.

    Cyclic Jacobi rotations run until the off-diagonal Frobenius mass drops
    below 1e-12 * ||M||_F.  Returns (eigenvalues ascending, eigenvector
    columns); ties keep the original diagonal order (stable sort), so the
    zero matrix yields the identity basis in natural order.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NotSymmetric("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(mat))) if mat.size else 1.0)
    if float(np.max(np.abs(mat - mat.T))) > 1e-12 * scale:
        raise NotSymmetric("matrix is not symmetric within tolerance")

    q = mat.shape[0]
    a = 0.5 * (mat + mat.T)
    v = np.eye(q)
    norm = float(np.linalg.norm(a))
    if q == 1 or norm == 0.0:
        order = np.argsort(np.diag(a), kind="stable")
        return np.diag(a)[order], v[:, order]

    thresh = 1e-12 * norm
    for _ in range(max_sweeps):
        off = math.sqrt(max(float(np.sum(a * a) - np.sum(np.diag(a) ** 2)), 0.0))
        if off <= thresh:
            break
        for p in range(q - 1):
            for r in range(p + 1, q):
                apr = a[p, r]
                if abs(apr) <= thresh / (q * q):
                    continue
                theta = (a[r, r] - a[p, p]) / (2.0 * apr)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, r]
                rot_r = s * a[:, p] + c * a[:, r]
                a[:, p], a[:, r] = rot_p, rot_r
                rot_p = c * a[p, :] - s * a[r, :]
                rot_r = s * a[p, :] + c * a[r, :]
                a[p, :], a[r, :] = rot_p, rot_r
                rot_p = c * v[:, p] - s * v[:, r]
                rot_r = s * v[:, p] + c * v[:, r]
                v[:, p], v[:, r] = rot_p, rot_r
    else:
        raise NoConvergence(f"Jacobi sweeps exceeded {max_sweeps}")

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


# ---------------------------------------------------------------------------
# Linear minimization oracles.


def lmo(base: CompactBaseSpec, cost: np.ndarray) -> np.ndarray:
    """A point of the base minimizing the linear cost.

    Ties in the simplex pick the lowest index; a (near-)zero cost on the
    ball factor returns its center, so lmo(base, 0) is a deterministic
    starting point.
    """
    c = _check_dim(base, cost)
    mu = base.scale
    m = base.dim
    out = np.zeros(m)
    if base.kind is BaseKind.SIMPLEX:
        out[int(np.argmin(c))] = mu
        return out
    if base.kind is BaseKind.SOC_SLICE:
        head = c[: m - 1]
        nrm = float(np.linalg.norm(head))
        if nrm > _ZERO_COST:
            out[: m - 1] = -mu * head / nrm
        out[m - 1] = mu
        return out
    if base.kind is BaseKind.SPECTRAPLEX:
        _, vecs = eigh(smat(c))
        v = vecs[:, 0]
        return mu * svec(np.outer(v, v))
    if base.kind is BaseKind.SVM_PRODUCT:
        s = base.s
        head = c[:s]
        nrm = float(np.linalg.norm(head))
        reduced = c[s:].copy()
        reduced[0] -= nrm
        slot = int(np.argmin(reduced))
        if slot == 0:
            if nrm > _ZERO_COST:
                out[:s] = -mu * head / nrm
            out[s] = mu
        else:
            out[s + slot] = mu
        return out
    raise DimensionMismatch(f"unknown base kind {base.kind}")


# ---------------------------------------------------------------------------
# Euclidean projections.


def project_simplex(y: np.ndarray, total: float = 1.0) -> np.ndarray:
    """Sort-and-threshold projection onto {x >= 0, sum x = total}."""
    y = np.ravel(np.asarray(y, dtype=float))
    u = np.sort(y)[::-1]
    cum = np.cumsum(u) - total
    idx = np.arange(1, y.size + 1)
    rho = int(np.max(np.nonzero(u * idx > cum)[0]))
    tau = cum[rho] / (rho + 1.0)
    return np.maximum(y - tau, 0.0)


def _project_soc(u: np.ndarray, t: float) -> tuple[np.ndarray, float]:
    # Projection onto the cone { (u, t) : |u| <= t }.
    nrm = float(np.linalg.norm(u))
    if nrm <= t:
        return u.copy(), t
    if nrm <= -t:
        return np.zeros_like(u), 0.0
    beta = 0.5 * (nrm + t)
    return beta * u / nrm, beta


def project(base: CompactBaseSpec, y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the base."""
    y = _check_dim(base, y)
    mu = base.scale
    m = base.dim
    if base.kind is BaseKind.SIMPLEX:
        return project_simplex(y, total=mu)
    if base.kind is BaseKind.SOC_SLICE:
        out = np.empty(m)
        head = y[: m - 1]
        nrm = float(np.linalg.norm(head))
        out[: m - 1] = head if nrm <= mu else mu * head / nrm
        out[m - 1] = mu
        return out
    if base.kind is BaseKind.SPECTRAPLEX:
        w, v = eigh(smat(y))
        w = project_simplex(w, total=mu)
        return svec((v * w) @ v.T)
    if base.kind is BaseKind.SVM_PRODUCT:
        return _project_svm_product(base, y)
    raise DimensionMismatch(f"unknown base kind {base.kind}")


def _project_svm_product(
    base: CompactBaseSpec, y: np.ndarray, tol: float = 1e-10, cap: int = 10_000
) -> np.ndarray:
    # Dykstra alternation between the SOC factor {|u| <= t} and the simplex
    # factor over the (t, w) slots; converges to the exact projection on the
    # intersection.
    s, mu = base.s, base.scale
    x = y.copy()
    p = np.zeros_like(y)
    q = np.zeros_like(y)
    for _ in range(cap):
        z = x + p
        xa = z.copy()
        xa[:s], xa[s] = _project_soc(z[:s], z[s])
        p = z - xa
        z = xa + q
        xb = z.copy()
        xb[s:] = project_simplex(z[s:], total=mu)
        q = z - xb
        if float(np.linalg.norm(xb - x)) < tol:
            return xb
        x = xb
    raise DykstraNoConvergence(f"Dykstra failed to settle within {cap} sweeps")


# ---------------------------------------------------------------------------
# l1 extremes and bound constants.


def l1_extremes(base: CompactBaseSpec) -> tuple[float, float | None]:
    """(min, max) of the l1 norm over the base; max may be unavailable.

    For the spectraplex only the norm-based lower bound scale/sqrt(q) is
    used and the maximum is not computed (returned as None).
    """
    mu = base.scale
    if base.kind is BaseKind.SIMPLEX:
        return mu, mu
    if base.kind is BaseKind.SOC_SLICE:
        return mu, mu * (math.sqrt(base.dim - 1) + 1.0)
    if base.kind is BaseKind.SPECTRAPLEX:
        return mu / math.sqrt(base.q), None
    if base.kind is BaseKind.SVM_PRODUCT:
        return mu, mu * (math.sqrt(base.s) + 1.0)
    raise DimensionMismatch(f"unknown base kind {base.kind}")


def base_constants(base: CompactBaseSpec) -> BaseConstants:
    """Bound constants (c1, c2) for the base.

    c1 multiplies the distance lower endpoint, c2 the upper one.  For the
    simplex, SOC slice and SVM product c1 equals the exact reciprocal of the
    l1 maximum; for the spectraplex a proven 2/(q(q+1)) constant is used and
    flagged inexact, with c2 = sqrt(q).
    """
    mu = base.scale
    if base.kind is BaseKind.SIMPLEX:
        return BaseConstants(1.0 / mu, 1.0 / mu, True)
    if base.kind is BaseKind.SOC_SLICE:
        return BaseConstants(1.0 / (mu * (math.sqrt(base.dim - 1) + 1.0)), 1.0 / mu, True)
    if base.kind is BaseKind.SPECTRAPLEX:
        q = base.q
        return BaseConstants(2.0 / (mu * q * (q + 1)), math.sqrt(q) / mu, False)
    if base.kind is BaseKind.SVM_PRODUCT:
        return BaseConstants(1.0 / (mu * (math.sqrt(base.s) + 1.0)), 1.0 / mu, True)
    raise DimensionMismatch(f"unknown base kind {base.kind}")


# ---------------------------------------------------------------------------
# Extreme-point sampling and membership.


def _canonical_extremes(base: CompactBaseSpec) -> list[np.ndarray]:
    m, mu = base.dim, base.scale
    out: list[np.ndarray] = []
    if base.kind is BaseKind.SIMPLEX:
        out = [mu * np.eye(m)[i] for i in range(m)]
    elif base.kind is BaseKind.SOC_SLICE:
        for i in range(m - 1):
            for sign in (1.0, -1.0):
                lam = np.zeros(m)
                lam[i] = sign
                lam[m - 1] = 1.0
                out.append(mu * lam)
    elif base.kind is BaseKind.SPECTRAPLEX:
        for i in range(base.q):
            e = np.zeros(base.q)
            e[i] = 1.0
            out.append(mu * svec(np.outer(e, e)))
    elif base.kind is BaseKind.SVM_PRODUCT:
        s = base.s
        for j in range(base.m_svm):
            lam = np.zeros(m)
            lam[s + 1 + j] = 1.0
            out.append(mu * lam)
        for i in range(s):
            for sign in (1.0, -1.0):
                lam = np.zeros(m)
                lam[i] = sign
                lam[s] = 1.0
                out.append(mu * lam)
    return out


def _unit_sphere(rng: np.random.Generator, d: int) -> np.ndarray:
    while True:
        v = rng.normal(size=d)
        nrm = float(np.linalg.norm(v))
        if nrm > 1e-12:
            return v / nrm


def sample_extreme(base: CompactBaseSpec, seed: int, count: int) -> list[np.ndarray]:
    """Deterministic-for-seed extreme points; canonical extremes come first.

    The simplex cycles its vertices; the list never drops a canonical
    extreme, so its length is max(count, number of canonical points).
    """
    if count < 1:
        raise DimensionMismatch("count must be >= 1")
    m, mu = base.dim, base.scale
    rng = np.random.default_rng(seed)
    pts = _canonical_extremes(base)
    if base.kind is BaseKind.SIMPLEX:
        while len(pts) < count:
            pts.append(pts[len(pts) % m].copy())
        return pts
    while len(pts) < count:
        if base.kind is BaseKind.SOC_SLICE:
            lam = np.empty(m)
            lam[: m - 1] = _unit_sphere(rng, m - 1)
            lam[m - 1] = 1.0
            pts.append(mu * lam)
        elif base.kind is BaseKind.SPECTRAPLEX:
            v = _unit_sphere(rng, base.q)
            pts.append(mu * svec(np.outer(v, v)))
        elif base.kind is BaseKind.SVM_PRODUCT:
            s = base.s
            lam = np.zeros(m)
            slot = int(rng.integers(0, base.m_svm + 1))
            if slot == 0:
                lam[:s] = _unit_sphere(rng, s) if s > 0 else ()
                lam[s] = 1.0
            else:
                lam[s + slot] = 1.0
            pts.append(mu * lam)
        else:
            raise DimensionMismatch(f"unknown base kind {base.kind}")
    return pts


def membership(base: CompactBaseSpec, lam: np.ndarray, tol: float) -> bool:
    """True when lam lies within tol of the base (kind-specific algebra)."""
    if tol <= 0:
        raise DimensionMismatch("tolerance must be positive")
    lam = _check_dim(base, lam)
    mu = base.scale
    m = base.dim
    if base.kind is BaseKind.SIMPLEX:
        return bool(np.min(lam) >= -tol and abs(float(np.sum(lam)) - mu) <= tol)
    if base.kind is BaseKind.SOC_SLICE:
        return bool(
            np.linalg.norm(lam[: m - 1]) <= mu + tol and abs(lam[m - 1] - mu) <= tol
        )
    if base.kind is BaseKind.SPECTRAPLEX:
        w, _ = eigh(smat(lam))
        return bool(w[0] >= -tol and abs(float(np.sum(w)) - mu) <= tol)
    if base.kind is BaseKind.SVM_PRODUCT:
        s = base.s
        t = lam[s]
        return bool(
            np.linalg.norm(lam[:s]) <= t + tol
            and t >= -tol
            and np.min(lam[s:], initial=np.inf) >= -tol
            and abs(float(np.sum(lam[s:])) - mu) <= tol
        )
    raise DimensionMismatch(f"unknown base kind {base.kind}")
