# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled numeric kernels.

Mirrors ``steerkit._purekern``: closed-form 2x2 Hermitian eigensolver,
cyclic Jacobi for 4x4 Hermitian / 3x3 symmetric matrices, one-sided Jacobi
SVD for real 3x3 matrices.  Same ordering conventions, same tolerances.
"""

import numpy as np

cimport cython
from libc.math cimport fabs, hypot, sqrt

BACKEND_NAME = "compiled"

ctypedef double complex cplx


cdef inline double _cabs(cplx z) nogil:
    return hypot(z.real, z.imag)


cdef inline void _vec2(double a, double b, cplx c, double r, double d,
                       cplx *v0, cplx *v1) nogil:
    # Unit eigenvector of [[a, c], [conj(c), b]] for the larger eigenvalue.
    cdef double n
    cdef cplx u0, u1
    if d >= 0.0:
        u0 = r + d
        u1 = c.conjugate()
    else:
        u0 = c
        u1 = r - d
    n = sqrt(_cabs(u0) * _cabs(u0) + _cabs(u1) * _cabs(u1))
    v0[0] = u0 / n
    v1[0] = u1 / n


def eigh2(h):
    """Eigen-decomposition of a 2x2 Hermitian matrix, closed form."""
    cdef cplx[:, :] hm = np.ascontiguousarray(h, dtype=np.complex128)
    cdef double a = hm[0, 0].real
    cdef double b = hm[1, 1].real
    cdef cplx c = hm[0, 1]
    cdef double m = 0.5 * (a + b)
    cdef double d = 0.5 * (a - b)
    cdef double r = hypot(d, _cabs(c))
    w = np.array([m + r, m - r])
    vecs = np.eye(2, dtype=np.complex128)
    if r < 1e-300:
        return w, vecs
    cdef cplx v0, v1
    _vec2(a, b, c, r, d, &v0, &v1)
    cdef cplx[:, :] vm = vecs
    vm[0, 0] = v0
    vm[1, 0] = v1
    vm[0, 1] = -v1.conjugate()
    vm[1, 1] = v0.conjugate()
    return w, vecs


cdef void _rot4(cplx[4][4] a, cplx[4][4] v, int p, int q) nogil:
    # One Jacobi rotation zeroing a[p][q] via the closed-form 2x2 solver.
    cdef double app = a[p][p].real
    cdef double aqq = a[q][q].real
    cdef cplx apq = a[p][q]
    cdef double m = 0.5 * (app + aqq)
    cdef double d = 0.5 * (app - aqq)
    cdef double r = hypot(d, _cabs(apq))
    if r < 1e-300:
        return
    cdef cplx u00, u10
    _vec2(app, aqq, apq, r, d, &u00, &u10)
    cdef cplx u01 = -u10.conjugate()
    cdef cplx u11 = u00.conjugate()
    cdef int i
    cdef cplx tp, tq
    # columns: A[:, [p, q]] @= U2 ; rows: U2^H @ A[[p, q], :]
    for i in range(4):
        tp = a[i][p]
        tq = a[i][q]
        a[i][p] = tp * u00 + tq * u10
        a[i][q] = tp * u01 + tq * u11
    for i in range(4):
        tp = a[p][i]
        tq = a[q][i]
        a[p][i] = u00.conjugate() * tp + u10.conjugate() * tq
        a[q][i] = u01.conjugate() * tp + u11.conjugate() * tq
    for i in range(4):
        tp = v[i][p]
        tq = v[i][q]
        v[i][p] = tp * u00 + tq * u10
        v[i][q] = tp * u01 + tq * u11


def eigh4(h):
    """Eigen-decomposition of a 4x4 Hermitian matrix, cyclic Jacobi."""
    cdef cplx[:, :] hm = np.ascontiguousarray(h, dtype=np.complex128)
    cdef cplx[4][4] a
    cdef cplx[4][4] v
    cdef int i, j, p, q, sweep
    cdef double nrm = 0.0
    for i in range(4):
        for j in range(4):
            a[i][j] = 0.5 * (hm[i, j] + hm[j, i].conjugate())
            v[i][j] = 1.0 if i == j else 0.0
            nrm += _cabs(a[i][j]) * _cabs(a[i][j])
    nrm = sqrt(nrm)
    cdef double rot_tol = 1e-16 * (1.0 if nrm < 1.0 else nrm)
    cdef double stop_tol = 1e-15 * (1.0 if nrm < 1.0 else nrm)
    cdef double off
    cdef cplx mean
    for sweep in range(60):
        off = 0.0
        for p in range(3):
            for q in range(p + 1, 4):
                if _cabs(a[p][q]) > off:
                    off = _cabs(a[p][q])
        if off <= stop_tol:
            break
        for p in range(3):
            for q in range(p + 1, 4):
                if _cabs(a[p][q]) > rot_tol:
                    _rot4(a, v, p, q)
        for p in range(4):
            for q in range(p + 1, 4):
                mean = 0.5 * (a[p][q] + a[q][p].conjugate())
                a[p][q] = mean
                a[q][p] = mean.conjugate()
    w_np = np.empty(4)
    v_np = np.empty((4, 4), dtype=np.complex128)
    cdef double[:] wv = w_np
    cdef cplx[:, :] vv = v_np
    cdef int[4] order
    cdef double[4] diag
    for i in range(4):
        diag[i] = a[i][i].real
        order[i] = i
    # insertion sort, descending
    cdef int k, tmp
    for i in range(1, 4):
        k = i
        while k > 0 and diag[order[k]] > diag[order[k - 1]]:
            tmp = order[k]
            order[k] = order[k - 1]
            order[k - 1] = tmp
            k -= 1
    for j in range(4):
        wv[j] = diag[order[j]]
        for i in range(4):
            vv[i, j] = v[i][order[j]]
    return w_np, v_np


def eigh3s(s):
    """Eigen-decomposition of a 3x3 real symmetric matrix, cyclic Jacobi."""
    cdef double[:, :] sm = np.ascontiguousarray(s, dtype=np.float64)
    cdef double[3][3] a
    cdef double[3][3] v
    cdef int i, j, p, q, sweep
    cdef double nrm = 0.0
    for i in range(3):
        for j in range(3):
            a[i][j] = 0.5 * (sm[i, j] + sm[j, i])
            v[i][j] = 1.0 if i == j else 0.0
            nrm += a[i][j] * a[i][j]
    nrm = sqrt(nrm)
    cdef double rot_tol = 1e-16 * (1.0 if nrm < 1.0 else nrm)
    cdef double stop_tol = 1e-15 * (1.0 if nrm < 1.0 else nrm)
    cdef double off, app, aqq, apq, d, r, u0, u1, n, c, sn, tp, tq, mean
    for sweep in range(60):
        off = fabs(a[0][1])
        if fabs(a[0][2]) > off:
            off = fabs(a[0][2])
        if fabs(a[1][2]) > off:
            off = fabs(a[1][2])
        if off <= stop_tol:
            break
        for p in range(2):
            for q in range(p + 1, 3):
                if fabs(a[p][q]) <= rot_tol:
                    continue
                app = a[p][p]
                aqq = a[q][q]
                apq = a[p][q]
                d = 0.5 * (app - aqq)
                r = hypot(d, apq)
                if r < 1e-300:
                    continue
                if d >= 0.0:
                    u0 = r + d
                    u1 = apq
                else:
                    u0 = apq
                    u1 = r - d
                n = hypot(u0, u1)
                c = u0 / n
                sn = u1 / n
                for i in range(3):
                    tp = a[i][p]
                    tq = a[i][q]
                    a[i][p] = tp * c + tq * sn
                    a[i][q] = -tp * sn + tq * c
                for i in range(3):
                    tp = a[p][i]
                    tq = a[q][i]
                    a[p][i] = c * tp + sn * tq
                    a[q][i] = -sn * tp + c * tq
                for i in range(3):
                    tp = v[i][p]
                    tq = v[i][q]
                    v[i][p] = tp * c + tq * sn
                    v[i][q] = -tp * sn + tq * c
        for p in range(3):
            for q in range(p + 1, 3):
                mean = 0.5 * (a[p][q] + a[q][p])
                a[p][q] = mean
                a[q][p] = mean
    w_np = np.empty(3)
    v_np = np.empty((3, 3))
    cdef double[:] wv = w_np
    cdef double[:, :] vv = v_np
    cdef int[3] order
    cdef double[3] diag
    for i in range(3):
        diag[i] = a[i][i]
        order[i] = i
    cdef int k, tmp
    for i in range(1, 3):
        k = i
        while k > 0 and diag[order[k]] > diag[order[k - 1]]:
            tmp = order[k]
            order[k] = order[k - 1]
            order[k - 1] = tmp
            k -= 1
    for j in range(3):
        wv[j] = diag[order[j]]
        for i in range(3):
            vv[i, j] = v[i][order[j]]
    return w_np, v_np


def svd3(t):
    """SVD of a real 3x3 matrix via one-sided Jacobi on the columns."""
    cdef double[:, :] tm = np.ascontiguousarray(t, dtype=np.float64)
    cdef double[3][3] g
    cdef double[3][3] v
    cdef int i, j, p, q, sweep
    for i in range(3):
        for j in range(3):
            g[i][j] = tm[i, j]
            v[i][j] = 1.0 if i == j else 0.0
    cdef bint converged
    cdef double app, aqq, apq, tau, tt, c, sn, gp, gq
    for sweep in range(60):
        converged = True
        for p in range(2):
            for q in range(p + 1, 3):
                app = 0.0
                aqq = 0.0
                apq = 0.0
                for i in range(3):
                    app += g[i][p] * g[i][p]
                    aqq += g[i][q] * g[i][q]
                    apq += g[i][p] * g[i][q]
                if fabs(apq) <= 1e-15 * sqrt(app * aqq) + 1e-300:
                    continue
                converged = False
                tau = (aqq - app) / (2.0 * apq)
                tt = (1.0 if tau >= 0.0 else -1.0) / (
                    fabs(tau) + sqrt(1.0 + tau * tau)
                )
                c = 1.0 / sqrt(1.0 + tt * tt)
                sn = tt * c
                for i in range(3):
                    gp = c * g[i][p] - sn * g[i][q]
                    gq = sn * g[i][p] + c * g[i][q]
                    g[i][p] = gp
                    g[i][q] = gq
                for i in range(3):
                    gp = c * v[i][p] - sn * v[i][q]
                    gq = sn * v[i][p] + c * v[i][q]
                    v[i][p] = gp
                    v[i][q] = gq
        if converged:
            break
    cdef double[3] svals
    for j in range(3):
        svals[j] = 0.0
        for i in range(3):
            svals[j] += g[i][j] * g[i][j]
        svals[j] = sqrt(svals[j])
    cdef int[3] order
    for i in range(3):
        order[i] = i
    cdef int k, tmp
    for i in range(1, 3):
        k = i
        while k > 0 and svals[order[k]] > svals[order[k - 1]]:
            tmp = order[k]
            order[k] = order[k - 1]
            order[k - 1] = tmp
            k -= 1
    s_np = np.zeros(3)
    u_np = np.zeros((3, 3))
    v_np = np.empty((3, 3))
    cdef double[:] sv = s_np
    cdef double[:, :] uv = u_np
    cdef double[:, :] vv = v_np
    cdef double smax = svals[order[0]]
    cdef double cut = smax * 1e-13
    if cut < 1e-300:
        cut = 1e-300
    cdef int rank = 0
    for j in range(3):
        if svals[order[j]] > cut:
            rank += 1
    for j in range(3):
        sv[j] = svals[order[j]] if j < rank else 0.0
        for i in range(3):
            vv[i, j] = v[i][order[j]]
    for j in range(rank):
        for i in range(3):
            uv[i, j] = g[i][order[j]] / sv[j]
    cdef double w0, w1, w2, wn
    cdef int imin
    if rank == 2:
        uv[0, 2] = uv[1, 0] * uv[2, 1] - uv[2, 0] * uv[1, 1]
        uv[1, 2] = uv[2, 0] * uv[0, 1] - uv[0, 0] * uv[2, 1]
        uv[2, 2] = uv[0, 0] * uv[1, 1] - uv[1, 0] * uv[0, 1]
        wn = sqrt(uv[0, 2] ** 2 + uv[1, 2] ** 2 + uv[2, 2] ** 2)
        for i in range(3):
            uv[i, 2] /= wn
    elif rank == 1:
        imin = 0
        if fabs(uv[1, 0]) < fabs(uv[imin, 0]):
            imin = 1
        if fabs(uv[2, 0]) < fabs(uv[imin, 0]):
            imin = 2
        w0 = -uv[imin, 0] * uv[0, 0]
        w1 = -uv[imin, 0] * uv[1, 0]
        w2 = -uv[imin, 0] * uv[2, 0]
        if imin == 0:
            w0 += 1.0
        elif imin == 1:
            w1 += 1.0
        else:
            w2 += 1.0
        wn = sqrt(w0 * w0 + w1 * w1 + w2 * w2)
        uv[0, 1] = w0 / wn
        uv[1, 1] = w1 / wn
        uv[2, 1] = w2 / wn
        uv[0, 2] = uv[1, 0] * uv[2, 1] - uv[2, 0] * uv[1, 1]
        uv[1, 2] = uv[2, 0] * uv[0, 1] - uv[0, 0] * uv[2, 1]
        uv[2, 2] = uv[0, 0] * uv[1, 1] - uv[1, 0] * uv[0, 1]
        wn = sqrt(uv[0, 2] ** 2 + uv[1, 2] ** 2 + uv[2, 2] ** 2)
        for i in range(3):
            uv[i, 2] /= wn
    elif rank == 0:
        for i in range(3):
            uv[i, i] = 1.0
    return s_np, u_np, v_np
