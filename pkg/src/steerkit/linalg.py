"""Dense Hermitian linear algebra for 2x2/4x4 complex and 3x3 real matrices.

Everything downstream (states, assemblages, criteria, the feasibility
solver) runs on these few fixed-size operations.  The heavy loops live in
the selected kernel backend (see :mod:`steerkit.backend`); this module adds
input validation, ordering conventions and the dual-basis construction.
"""

import math

import numpy as np

from steerkit import backend
from steerkit.errors import DegenerateSpanError, NonHermitianError, NonPsdError

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
#: Pauli basis (identity first): sigma_0 .. sigma_3.
PAULI = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)

HERM_TOL = 1e-10
PSD_TOL = 1e-10
INDEPENDENCE_TOL = 1e-8
RANK_TOL = 1e-9


def check_hermitian(m, tol=HERM_TOL):
    """Raise :class:`NonHermitianError` if ``m`` is not Hermitian within ``tol``."""
    m = np.asarray(m, dtype=complex)
    dev = np.max(np.abs(m - m.conj().T))
    if dev > tol:
        raise NonHermitianError(
            f"matrix deviates from Hermiticity by {dev:.3e} (tol {tol:.0e})"
        )
    return m


def eigh(m, herm_tol=HERM_TOL):
    """Eigenvalues (descending) and orthonormal eigenvector columns.

    Supports 2x2 and 4x4 complex Hermitian matrices.
    """
    m = check_hermitian(m, herm_tol)
    if m.shape == (2, 2):
        return backend.eigh2(m)
    if m.shape == (4, 4):
        return backend.eigh4(m)
    raise ValueError(f"unsupported shape {m.shape}; expected 2x2 or 4x4")


def eigvalsh(m, herm_tol=HERM_TOL):
    """Eigenvalues only, descending."""
    return eigh(m, herm_tol)[0]


def eigh_sym3(s):
    """Eigen-decomposition of a real symmetric 3x3 matrix (descending)."""
    s = np.asarray(s, dtype=float)
    if s.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {s.shape}")
    if np.max(np.abs(s - s.T)) > HERM_TOL:
        raise NonHermitianError("matrix is not symmetric")
    return backend.eigh3s(s)


def psd_sqrt_pinv(m, rank_tol=RANK_TOL):
    """Square root and pseudo-inverse square root of a PSD 2x2 matrix.

    Eigenvalues below ``rank_tol`` (relative to the largest) count as zero
    in the pseudo-inverse.  Returns ``(sqrt, inv_sqrt_pinv, rank)``.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError("psd_sqrt_pinv expects a 2x2 matrix")
    w, v = eigh(m)
    if w[-1] < -PSD_TOL:
        raise NonPsdError(f"matrix has eigenvalue {w[-1]:.3e} < -{PSD_TOL:.0e}")
    w = np.maximum(w, 0.0)
    cut = rank_tol * max(w[0], 0.0)
    rank = int(np.sum(w > cut))
    sq = np.zeros(2)
    isq = np.zeros(2)
    for i in range(rank):
        sq[i] = math.sqrt(w[i])
        isq[i] = 1.0 / sq[i]
    root = (v * sq) @ v.conj().T
    pinv_root = (v * isq) @ v.conj().T
    return root, pinv_root, rank


def svd3(t):
    """SVD of a real 3x3 matrix: singular values descending, ``t = U S V^T``."""
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError("matrix entries must be finite")
    return backend.svd3(t)


def dual_basis(b1, b2, independence_tol=INDEPENDENCE_TOL):
    """Dual pair of two independent unit vectors within their span.

    Returns ``(b1p, b2p)`` with ``b_mp . b_n = delta_mn``; both duals lie in
    ``span{b1, b2}``.  For orthogonal inputs the duals equal the inputs.
    """
    b1 = np.asarray(b1, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    for b in (b1, b2):
        if abs(b @ b - 1.0) > 2e-6:
            raise ValueError("dual_basis expects unit vectors")
    g12 = float(b1 @ b2)
    det = 1.0 - g12 * g12
    if det <= independence_tol:
        raise DegenerateSpanError(
            "measurement vectors are (anti)parallel within tolerance; "
            "their span is degenerate"
        )
    # Inverse of the 2x2 Gram matrix applied to the basis rows.
    b1p = (b1 - g12 * b2) / det
    b2p = (b2 - g12 * b1) / det
    return b1p, b2p


def pauli_coords(x):
    """Pauli components ``c_k = Tr(x sigma_k)`` of a 2x2 Hermitian matrix."""
    x = np.asarray(x, dtype=complex)
    return np.array([np.trace(x @ p).real for p in PAULI])


def op_from_coords(c):
    """2x2 Hermitian matrix with Pauli components ``c``: ``(1/2) sum c_k sigma_k``."""
    c = np.asarray(c, dtype=float)
    return 0.5 * (c[0] * I2 + c[1] * SIGMA_X + c[2] * SIGMA_Y + c[3] * SIGMA_Z)


def bloch_op(weight, vec):
    """Shorthand for ``(1/2)(weight * I + vec . sigma)``."""
    vec = np.asarray(vec, dtype=float)
    return 0.5 * (
        weight * I2 + vec[0] * SIGMA_X + vec[1] * SIGMA_Y + vec[2] * SIGMA_Z
    )
