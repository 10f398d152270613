"""Pure-Python numeric kernels (fallback backend).

Same interface as the compiled module ``steerkit._fastkern``: a closed-form
2x2 Hermitian eigensolver, cyclic Jacobi eigensolvers for 4x4 Hermitian and
3x3 real symmetric matrices, and a one-sided Jacobi SVD for real 3x3
matrices.  Eigenvalues and singular values are returned in descending order;
eigenvector/singular-vector matrices carry them as columns.

No LAPACK: every routine is a fixed-size direct or Jacobi iteration, which
is all the toolkit needs (nothing here exceeds dimension 4).
"""

import math

import numpy as np

BACKEND_NAME = "pure"


def _eigvec2(a, b, c, r, d, w1):
    # Eigenvector of [[a, c], [conj(c), b]] for the larger eigenvalue w1,
    # picking the better-conditioned of the two analytic forms.
    if d >= 0.0:
        v0, v1 = complex(r + d), complex(c).conjugate()
    else:
        v0, v1 = complex(c), complex(r - d)
    n = math.sqrt(abs(v0) ** 2 + abs(v1) ** 2)
    return v0 / n, v1 / n


def eigh2(h):
    """Eigen-decomposition of a 2x2 Hermitian matrix, closed form."""
    a = h[0, 0].real
    b = h[1, 1].real
    c = complex(h[0, 1])
    m = 0.5 * (a + b)
    d = 0.5 * (a - b)
    r = math.hypot(d, abs(c))
    w = np.array([m + r, m - r])
    if r < 1e-300:
        return w, np.eye(2, dtype=complex)
    v0, v1 = _eigvec2(a, b, c, r, d, m + r)
    vecs = np.array(
        [[v0, -v1.conjugate()], [v1, v0.conjugate()]], dtype=complex
    )
    return w, vecs


def eigh4(h):
    """Eigen-decomposition of a 4x4 Hermitian matrix, cyclic Jacobi."""
    a = np.array(h, dtype=complex)
    a = 0.5 * (a + a.conj().T)
    v = np.eye(4, dtype=complex)
    nrm = math.sqrt((a * a.conj()).real.sum())
    rot_tol = 1e-16 * max(1.0, nrm)
    stop_tol = 1e-15 * max(1.0, nrm)
    for _ in range(60):
        off = 0.0
        for p in range(3):
            for q in range(p + 1, 4):
                off = max(off, abs(a[p, q]))
        if off <= stop_tol:
            break
        for p in range(3):
            for q in range(p + 1, 4):
                if abs(a[p, q]) <= rot_tol:
                    continue
                blk = np.array(
                    [[a[p, p], a[p, q]], [a[q, p], a[q, q]]], dtype=complex
                )
                _, u2 = eigh2(blk)
                a[:, [p, q]] = a[:, [p, q]] @ u2
                a[[p, q], :] = u2.conj().T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ u2
        a = 0.5 * (a + a.conj().T)
    w = np.real(np.diag(a))
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eigh3s(s):
    """Eigen-decomposition of a 3x3 real symmetric matrix, cyclic Jacobi."""
    a = np.array(s, dtype=float)
    a = 0.5 * (a + a.T)
    v = np.eye(3)
    nrm = math.sqrt((a * a).sum())
    rot_tol = 1e-16 * max(1.0, nrm)
    stop_tol = 1e-15 * max(1.0, nrm)
    for _ in range(60):
        off = max(abs(a[0, 1]), abs(a[0, 2]), abs(a[1, 2]))
        if off <= stop_tol:
            break
        for p in range(2):
            for q in range(p + 1, 3):
                if abs(a[p, q]) <= rot_tol:
                    continue
                app, aqq, apq = a[p, p], a[q, q], a[p, q]
                d = 0.5 * (app - aqq)
                r = math.hypot(d, apq)
                if d >= 0.0:
                    v0, v1 = r + d, apq
                else:
                    v0, v1 = apq, r - d
                n = math.hypot(v0, v1)
                c, sn = v0 / n, v1 / n
                u2 = np.array([[c, -sn], [sn, c]])
                a[:, [p, q]] = a[:, [p, q]] @ u2
                a[[p, q], :] = u2.T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ u2
        a = 0.5 * (a + a.T)
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def svd3(t):
    """SVD of a real 3x3 matrix via one-sided Jacobi on the columns."""
    g = np.array(t, dtype=float)
    v = np.eye(3)
    for _ in range(60):
        converged = True
        for p in range(2):
            for q in range(p + 1, 3):
                app = g[:, p] @ g[:, p]
                aqq = g[:, q] @ g[:, q]
                apq = g[:, p] @ g[:, q]
                if abs(apq) <= 1e-15 * math.sqrt(app * aqq) + 1e-300:
                    continue
                converged = False
                tau = (aqq - app) / (2.0 * apq)
                tt = math.copysign(1.0, tau) / (
                    abs(tau) + math.sqrt(1.0 + tau * tau)
                )
                c = 1.0 / math.sqrt(1.0 + tt * tt)
                sn = tt * c
                gp = c * g[:, p] - sn * g[:, q]
                gq = sn * g[:, p] + c * g[:, q]
                g[:, p], g[:, q] = gp, gq
                vp = c * v[:, p] - sn * v[:, q]
                vq = sn * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vp, vq
        if converged:
            break
    sv = np.sqrt((g * g).sum(axis=0))
    order = np.argsort(-sv, kind="stable")
    sv = sv[order]
    g = g[:, order]
    v = v[:, order]
    u = np.zeros((3, 3))
    rank = int(np.sum(sv > max(1e-300, sv[0] * 1e-13)))
    for i in range(rank):
        u[:, i] = g[:, i] / sv[i]
    sv[rank:] = 0.0
    if rank == 2:
        w = np.cross(u[:, 0], u[:, 1])
        u[:, 2] = w / math.sqrt(w @ w)
    elif rank == 1:
        e = np.zeros(3)
        e[int(np.argmin(np.abs(u[:, 0])))] = 1.0
        w = e - (e @ u[:, 0]) * u[:, 0]
        u[:, 1] = w / math.sqrt(w @ w)
        w = np.cross(u[:, 0], u[:, 1])
        u[:, 2] = w / math.sqrt(w @ w)
    elif rank == 0:
        u = np.eye(3)
    return sv, u, v
