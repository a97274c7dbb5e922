"""Problem data model: cones, nominal data, compact bases, and the svec map.

The constraint system under study is ``A x + b in -K`` for a self-dual cone
K, with every row datum ``(a_i, b_i)`` allowed to move inside a Euclidean
ball of radius ``r_i``.  All types here are immutable value objects; arrays
are copied on construction and marked read-only, so instances can be shared
freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union

import numpy as np

from .errors import DimensionMismatch, NonFiniteEntry, NotSymmetric, PsdDimInvalid

__all__ = [
    "NonnegOrthant",
    "SecondOrderCone",
    "PsdCone",
    "ProductCone",
    "ConeKind",
    "cone_dim",
    "NominalProblem",
    "UncertaintyRadii",
    "BaseKind",
    "CompactBaseSpec",
    "SvecMap",
    "svec",
    "smat",
    "validate_problem",
    "natural_base",
]


# ---------------------------------------------------------------------------
# Cones.  All supported cones are self-dual, so K* is stored implicitly as K.


@dataclass(frozen=True)
class NonnegOrthant:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise DimensionMismatch("orthant dimension must be >= 1")


@dataclass(frozen=True)
class SecondOrderCone:
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise DimensionMismatch("second-order cone needs dimension >= 2")


@dataclass(frozen=True)
class PsdCone:
    """PSD cone of q x q symmetric matrices, vectorized to length q(q+1)/2."""

    q: int

    def __post_init__(self):
        if self.q < 1:
            raise DimensionMismatch("PSD cone side must be >= 1")


@dataclass(frozen=True)
class ProductCone:
    """Second-order cone of dimension soc_dim crossed with an orthant."""

    soc_dim: int
    orthant_dim: int

    def __post_init__(self):
        if self.soc_dim < 2 or self.orthant_dim < 1:
            raise DimensionMismatch("product cone factors too small")


ConeKind = Union[NonnegOrthant, SecondOrderCone, PsdCone, ProductCone]


def cone_dim(cone: ConeKind) -> int:
    """Ambient dimension m of the cone (row count of the constraint system)."""
    if isinstance(cone, NonnegOrthant):
        return cone.m
    if isinstance(cone, SecondOrderCone):
        return cone.m
    if isinstance(cone, PsdCone):
        return cone.q * (cone.q + 1) // 2
    if isinstance(cone, ProductCone):
        return cone.soc_dim + cone.orthant_dim
    raise TypeError(f"not a cone kind: {cone!r}")


# ---------------------------------------------------------------------------
# Nominal problem data.


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, order="C")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class NominalProblem:
    """Nominal data (A, b, K) of the constraint system ``A x + b in -K``.

    ``a_bar`` has one row per cone coordinate; ``b_bar`` matches its row
    count; ``cone`` fixes the ambient geometry.
    """

    a_bar: np.ndarray
    b_bar: np.ndarray
    cone: ConeKind

    def __post_init__(self):
        object.__setattr__(self, "a_bar", _readonly(np.atleast_2d(self.a_bar)))
        object.__setattr__(self, "b_bar", _readonly(np.ravel(self.b_bar)))

    @property
    def m(self) -> int:
        return self.a_bar.shape[0]

    @property
    def n(self) -> int:
        return self.a_bar.shape[1]


@dataclass(frozen=True)
class UncertaintyRadii:
    """Per-row ball radii; r_i = 0 marks a deterministic row."""

    r: np.ndarray

    def __post_init__(self):
        r = _readonly(np.ravel(self.r))
        if not np.all(np.isfinite(r)):
            raise NonFiniteEntry("radii must be finite")
        if np.any(r < 0):
            raise DimensionMismatch("radii must be nonnegative")
        object.__setattr__(self, "r", r)

    @staticmethod
    def uniform(alpha: float, m: int) -> "UncertaintyRadii":
        return UncertaintyRadii(np.full(m, float(alpha)))


# ---------------------------------------------------------------------------
# Compact bases of K* (= K).


class BaseKind(Enum):
    SIMPLEX = "simplex"
    SOC_SLICE = "soc_slice"
    SPECTRAPLEX = "spectraplex"
    SVM_PRODUCT = "svm_product"


@dataclass(frozen=True)
class CompactBaseSpec:
    """A compact base B of the dual cone, scaled by ``scale``.

    kind/dim fix the geometry:
      * SIMPLEX(m): unit simplex in R^m.
      * SOC_SLICE(m): { |(lam_1..lam_{m-1})| <= 1, lam_m = 1 }.
      * SPECTRAPLEX(q): PSD trace-one matrices under svec, dim = q(q+1)/2.
      * SVM_PRODUCT(s, m_svm): { |lam_{1:s}| <= lam_{s+1} } coupled with the
        simplex over slots s+1 .. s+1+m_svm; dim = s + 1 + m_svm.
    """

    kind: BaseKind
    dim: int
    q: int = 0
    s: int = 0
    m_svm: int = 0
    scale: float = 1.0

    def __post_init__(self):
        if self.scale <= 0:
            raise DimensionMismatch("base scale must be positive")

    @staticmethod
    def simplex(m: int, scale: float = 1.0) -> "CompactBaseSpec":
        return CompactBaseSpec(BaseKind.SIMPLEX, m, scale=scale)

    @staticmethod
    def soc_slice(m: int, scale: float = 1.0) -> "CompactBaseSpec":
        if m < 2:
            raise DimensionMismatch("soc slice needs dimension >= 2")
        return CompactBaseSpec(BaseKind.SOC_SLICE, m, scale=scale)

    @staticmethod
    def spectraplex(q: int, scale: float = 1.0) -> "CompactBaseSpec":
        return CompactBaseSpec(BaseKind.SPECTRAPLEX, q * (q + 1) // 2, q=q, scale=scale)

    @staticmethod
    def svm_product(s: int, m_svm: int, scale: float = 1.0) -> "CompactBaseSpec":
        return CompactBaseSpec(
            BaseKind.SVM_PRODUCT, s + 1 + m_svm, s=s, m_svm=m_svm, scale=scale
        )

    def scaled(self, mu: float) -> "CompactBaseSpec":
        return replace(self, scale=self.scale * mu)


def natural_base(cone: ConeKind) -> CompactBaseSpec:
    """The canonical compact base of K* for each supported cone."""
    if isinstance(cone, NonnegOrthant):
        return CompactBaseSpec.simplex(cone.m)
    if isinstance(cone, SecondOrderCone):
        return CompactBaseSpec.soc_slice(cone.m)
    if isinstance(cone, PsdCone):
        return CompactBaseSpec.spectraplex(cone.q)
    if isinstance(cone, ProductCone):
        return CompactBaseSpec.svm_product(cone.soc_dim - 1, cone.orthant_dim)
    raise TypeError(f"not a cone kind: {cone!r}")


# ---------------------------------------------------------------------------
# Symmetric-matrix vectorization.  Row-major upper triangle, off-diagonal
# entries scaled by sqrt(2) so the vector inner product equals the trace
# inner product.

_SQRT2 = math.sqrt(2.0)


def _upper_indices(q: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(q) for j in range(i, q)]


@dataclass(frozen=True)
class SvecMap:
    """Invertible isometry between q x q symmetric matrices and R^{q(q+1)/2}."""

    q: int
    ordering: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "ordering", tuple(_upper_indices(self.q)))

    @property
    def dim(self) -> int:
        return self.q * (self.q + 1) // 2

    def to_vector(self, mat: np.ndarray) -> np.ndarray:
        return svec(mat)

    def to_matrix(self, vec: np.ndarray) -> np.ndarray:
        return smat(vec)


def _check_symmetric(mat: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NotSymmetric("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(mat))) if mat.size else 1.0)
    if float(np.max(np.abs(mat - mat.T))) > tol * scale:
        raise NotSymmetric("matrix is not symmetric within tolerance")
    return mat


def svec(mat: np.ndarray) -> np.ndarray:
    """Vectorize a symmetric matrix; off-diagonals carry a sqrt(2) factor."""
    mat = _check_symmetric(mat)
    q = mat.shape[0]
    out = np.empty(q * (q + 1) // 2)
    k = 0
    for i in range(q):
        out[k] = mat[i, i]
        k += 1
        for j in range(i + 1, q):
            out[k] = _SQRT2 * mat[i, j]
            k += 1
    return out


def smat(vec: np.ndarray) -> np.ndarray:
    """Inverse of :func:`svec`."""
    vec = np.ravel(np.asarray(vec, dtype=float))
    d = vec.shape[0]
    q = int(round((math.sqrt(8 * d + 1) - 1) / 2))
    if q * (q + 1) // 2 != d:
        raise DimensionMismatch(f"vector length {d} is not triangular")
    out = np.empty((q, q))
    k = 0
    for i in range(q):
        out[i, i] = vec[k]
        k += 1
        for j in range(i + 1, q):
            out[i, j] = out[j, i] = vec[k] / _SQRT2
            k += 1
    return out


# ---------------------------------------------------------------------------
# Validation.


def validate_problem(p: NominalProblem) -> NominalProblem:
    """Check all type invariants; returns ``p`` unchanged when they hold.

    Idempotent by construction.  Raises DimensionMismatch, NonFiniteEntry
    or PsdDimInvalid.
    """
    if p.a_bar.ndim != 2:
        raise DimensionMismatch("A must be a matrix")
    m, n = p.a_bar.shape
    if n < 1 or m < 1:
        raise DimensionMismatch("need m >= 1 rows and n >= 1 columns")
    if p.b_bar.shape != (m,):
        raise DimensionMismatch(
            f"b has length {p.b_bar.shape[0]}, expected {m}"
        )
    if not (np.all(np.isfinite(p.a_bar)) and np.all(np.isfinite(p.b_bar))):
        raise NonFiniteEntry("problem data must be finite")
    if isinstance(p.cone, PsdCone):
        want = p.cone.q * (p.cone.q + 1) // 2
        if m != want:
            raise PsdDimInvalid(
                f"PSD cone with q={p.cone.q} needs m={want}, got {m}"
            )
    elif cone_dim(p.cone) != m:
        raise DimensionMismatch(
            f"cone dimension {cone_dim(p.cone)} does not match m={m}"
        )
    return p
