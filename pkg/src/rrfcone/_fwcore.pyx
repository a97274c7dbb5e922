# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Frank-Wolfe kernel.

Mirrors the numpy reference loop in rrfcone.solver step for step: same
deterministic start, same linear-minimization tie-breaks, same line-search
candidate order.  Only float64 memoryviews and libc math are used, so the
extension builds without the numpy headers.
"""

from libc.math cimport sqrt, fabs, copysign
from libc.stdlib cimport malloc, free

import numpy as np

cdef double ZERO_COST = 1e-14

cdef int SIMPLEX = 0
cdef int SOC_SLICE = 1
cdef int SPECTRAPLEX = 2
cdef int SVM_PRODUCT = 3


cdef double _dot(double* x, double* y, int n) nogil:
    cdef double acc = 0.0
    cdef int i
    for i in range(n):
        acc += x[i] * y[i]
    return acc


cdef double _nrm2(double* x, int n) nogil:
    return sqrt(_dot(x, x, n))


cdef int _jacobi(double* a, double* v, int q, int max_sweeps) nogil:
    # Cyclic Jacobi on a row-major q*q symmetric matrix; eigenvectors in
    # the columns of v.  Returns 0 on convergence, -1 otherwise.
    cdef int i, j, p, r, sweep
    cdef double norm = 0.0, off, apr, theta, t, c, s, tp, tr, thresh
    for i in range(q):
        for j in range(q):
            v[i * q + j] = 1.0 if i == j else 0.0
            norm += a[i * q + j] * a[i * q + j]
    norm = sqrt(norm)
    if q == 1 or norm == 0.0:
        return 0
    thresh = 1e-12 * norm
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(q):
            for j in range(q):
                if i != j:
                    off += a[i * q + j] * a[i * q + j]
        off = sqrt(off)
        if off <= thresh:
            return 0
        for p in range(q - 1):
            for r in range(p + 1, q):
                apr = a[p * q + r]
                if fabs(apr) <= thresh / (q * q):
                    continue
                theta = (a[r * q + r] - a[p * q + p]) / (2.0 * apr)
                t = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for i in range(q):
                    tp = c * a[i * q + p] - s * a[i * q + r]
                    tr = s * a[i * q + p] + c * a[i * q + r]
                    a[i * q + p] = tp
                    a[i * q + r] = tr
                for i in range(q):
                    tp = c * a[p * q + i] - s * a[r * q + i]
                    tr = s * a[p * q + i] + c * a[r * q + i]
                    a[p * q + i] = tp
                    a[r * q + i] = tr
                for i in range(q):
                    tp = c * v[i * q + p] - s * v[i * q + r]
                    tr = s * v[i * q + p] + c * v[i * q + r]
                    v[i * q + p] = tp
                    v[i * q + r] = tr
    return -1


cdef int _lmo(int kind, int q, int s, double scale, double* c, double* out, int m,
              double* w1, double* w2) nogil:
    # w1, w2: scratch of q*q doubles each (spectraplex only).
    cdef int i, j, k, best
    cdef double nrm, bestval, val, red
    for i in range(m):
        out[i] = 0.0
    if kind == SIMPLEX:
        best = 0
        bestval = c[0]
        for i in range(1, m):
            if c[i] < bestval:
                best = i
                bestval = c[i]
        out[best] = scale
        return 0
    if kind == SOC_SLICE:
        nrm = _nrm2(c, m - 1)
        if nrm > ZERO_COST:
            for i in range(m - 1):
                out[i] = -scale * c[i] / nrm
        out[m - 1] = scale
        return 0
    if kind == SPECTRAPLEX:
        # smat(c) into w1, eigenvectors into w2.
        k = 0
        for i in range(q):
            w1[i * q + i] = c[k]
            k += 1
            for j in range(i + 1, q):
                w1[i * q + j] = c[k] / sqrt(2.0)
                w1[j * q + i] = w1[i * q + j]
                k += 1
        if _jacobi(w1, w2, q, 100) != 0:
            return -1
        best = 0
        bestval = w1[0]
        for i in range(1, q):
            if w1[i * q + i] < bestval:
                best = i
                bestval = w1[i * q + i]
        # out = scale * svec(v v^T) with v = column `best` of w2.
        k = 0
        for i in range(q):
            out[k] = scale * w2[i * q + best] * w2[i * q + best]
            k += 1
            for j in range(i + 1, q):
                out[k] = scale * sqrt(2.0) * w2[i * q + best] * w2[j * q + best]
                k += 1
        return 0
    if kind == SVM_PRODUCT:
        nrm = _nrm2(c, s)
        best = 0
        bestval = c[s] - nrm
        for j in range(1, m - s):
            red = c[s + j]
            if red < bestval:
                best = j
                bestval = red
        if best == 0:
            if nrm > ZERO_COST:
                for i in range(s):
                    out[i] = -scale * c[i] / nrm
            out[s] = scale
        else:
            out[s + best] = scale
        return 0
    return -2


cdef double _phi(double uu, double uv, double vv, double hp, double hq, double g) nogil:
    cdef double h = hp + hq * g
    cdef double val = uu + 2.0 * uv * g + vv * g * g
    if h > 0.0:
        val += h * h
    return val


cdef double _best_step(double uu, double uv, double vv, double hp, double hq,
                       double gmax) nogil:
    cdef double cand[5]
    cdef int ncand = 2, i
    cdef double g, denom, best_g, best_val, val
    cand[0] = 0.0
    cand[1] = gmax
    if hq != 0.0:
        g = -hp / hq
        if 0.0 < g < gmax:
            cand[ncand] = g
            ncand += 1
    if vv > 0.0:
        g = -uv / vv
        if 0.0 < g < gmax:
            cand[ncand] = g
            ncand += 1
    denom = vv + hq * hq
    if denom > 0.0:
        g = -(uv + hp * hq) / denom
        if 0.0 < g < gmax:
            cand[ncand] = g
            ncand += 1
    best_g = 0.0
    best_val = _phi(uu, uv, vv, hp, hq, 0.0)
    for i in range(1, ncand):
        val = _phi(uu, uv, vv, hp, hq, cand[i])
        if val < best_val:
            best_g = cand[i]
            best_val = val
    return best_g


def fw_solve(double[:, ::1] a, double[::1] b, int kind, int q, int s, int m_svm,
             double scale, double gap_tol, long max_iters):
    """Run the Frank-Wolfe loop; returns (f, gap, lambda, iterations, converged)."""
    cdef int m = a.shape[0]
    cdef int n = a.shape[1]
    cdef int qq = q * q if kind == SPECTRAPLEX else 1

    lam_np = np.zeros(m)
    cdef double[::1] lam = lam_np
    cdef double* grad = <double*> malloc(m * sizeof(double))
    cdef double* sdir = <double*> malloc(m * sizeof(double))
    cdef double* u = <double*> malloc(n * sizeof(double))
    cdef double* v = <double*> malloc(n * sizeof(double))
    cdef double* w1 = <double*> malloc(qq * sizeof(double))
    cdef double* w2 = <double*> malloc(qq * sizeof(double))
    if not (grad and sdir and u and v and w1 and w2):
        free(grad); free(sdir); free(u); free(v); free(w1); free(w2)
        raise MemoryError()

    cdef double f = 0.0, gap = 0.0, hinge, hlam, hq_, uu, uv, vv, step
    cdef long k, iters = 0
    cdef bint converged = False
    cdef int i, j, rc = 0

    with nogil:
        # Deterministic start: lmo at zero cost.
        for i in range(m):
            grad[i] = 0.0
        rc = _lmo(kind, q, s, scale, grad, &lam[0], m, w1, w2)
        if rc == 0:
            for k in range(max_iters + 1):
                for j in range(n):
                    u[j] = 0.0
                for i in range(m):
                    for j in range(n):
                        u[j] += a[i, j] * lam[i]
                hlam = -_dot(&b[0], &lam[0], m)
                hinge = hlam if hlam > 0.0 else 0.0
                f = _dot(u, u, n) + hinge * hinge
                for i in range(m):
                    grad[i] = -2.0 * hinge * b[i]
                    for j in range(n):
                        grad[i] += 2.0 * a[i, j] * u[j]
                rc = _lmo(kind, q, s, scale, grad, sdir, m, w1, w2)
                if rc != 0:
                    break
                gap = 0.0
                for i in range(m):
                    gap += grad[i] * (lam[i] - sdir[i])
                if gap < 0.0:
                    gap = 0.0
                iters = k
                if gap <= gap_tol:
                    converged = True
                    break
                if k == max_iters:
                    break
                for i in range(m):
                    sdir[i] = sdir[i] - lam[i]
                for j in range(n):
                    v[j] = 0.0
                for i in range(m):
                    for j in range(n):
                        v[j] += a[i, j] * sdir[i]
                hq_ = -_dot(&b[0], sdir, m)
                uu = _dot(u, u, n)
                uv = _dot(u, v, n)
                vv = _dot(v, v, n)
                step = _best_step(uu, uv, vv, hlam, hq_, 1.0)
                for i in range(m):
                    lam[i] += step * sdir[i]

    free(grad); free(sdir); free(u); free(v); free(w1); free(w2)
    if rc == -1:
        raise RuntimeError("Jacobi eigensolver failed to converge inside the kernel")
    if rc == -2:
        raise ValueError("unknown base kind code")
    return f, gap, lam_np, int(iters), bool(converged)
