"""Kernel backend selection.

The Frank-Wolfe iteration is the package's hot loop.  A Cython extension
(rrfcone._fwcore) implements it over all four base kinds; this module picks
it up when the build produced it and otherwise falls back to the numpy
reference loop in rrfcone.solver.  RRF_BACKEND=python|compiled|auto forces
the choice (auto is the default).
"""

from __future__ import annotations

import os

import numpy as np

from .model import BaseKind, CompactBaseSpec

try:
    from . import _fwcore
except ImportError:
    _fwcore = None

_KIND_CODES = {
    BaseKind.SIMPLEX: 0,
    BaseKind.SOC_SLICE: 1,
    BaseKind.SPECTRAPLEX: 2,
    BaseKind.SVM_PRODUCT: 3,
}


def backend_name() -> str:
    """Resolved backend: 'compiled' or 'python'."""
    forced = os.environ.get("RRF_BACKEND", "auto").lower()
    if forced == "python":
        return "python"
    if forced == "compiled":
        if _fwcore is None:
            raise RuntimeError(
                "RRF_BACKEND=compiled but rrfcone._fwcore is not built"
            )
        return "compiled"
    if forced != "auto":
        raise RuntimeError(f"RRF_BACKEND must be auto|compiled|python, got {forced!r}")
    return "compiled" if _fwcore is not None else "python"


def compiled_available() -> bool:
    return _fwcore is not None


def fw_solve(a, b, base: CompactBaseSpec, gap_tol: float, max_iters: int, fallback):
    """Dispatch one Frank-Wolfe solve to the resolved backend.

    Returns (f_hi, final_gap, lambda_star, iterations, converged).
    """
    if backend_name() == "compiled":
        # The model's arrays are read-only; memoryviews need writable buffers.
        a = np.array(a, dtype=float, order="C", copy=True)
        b = np.array(b, dtype=float, order="C", copy=True)
        return _fwcore.fw_solve(
            a,
            b,
            _KIND_CODES[base.kind],
            base.q,
            base.s,
            base.m_svm,
            base.scale,
            float(gap_tol),
            int(max_iters),
        )
    return fallback(np.asarray(a, dtype=float), np.asarray(b, dtype=float), base, gap_tol, max_iters)
