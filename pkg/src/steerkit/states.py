"""Two-qubit states in Bloch parametrization, named families, entanglement.

A state is stored as its Bloch data (alpha, beta, T); the 4x4 density
matrix is derived, never the source of truth.  All criteria downstream are
functions of (alpha, beta, T).
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from steerkit import linalg
from steerkit.errors import InvalidStateError
from steerkit.linalg import PAULI

PSD_TOL = 1e-10
SIN2T_TOL = 1e-12


def _kron_pauli():
    ops = np.empty((4, 4, 4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            ops[i, j] = np.kron(PAULI[i], PAULI[j])
    return ops


#: sigma_i (x) sigma_j for i, j = 0..3 (identity included).
PAULI_KRON = _kron_pauli()


def _density_matrix(alpha, beta, t):
    rho = PAULI_KRON[0, 0].copy()
    for i in range(3):
        rho += alpha[i] * PAULI_KRON[i + 1, 0]
        rho += beta[i] * PAULI_KRON[0, i + 1]
        for j in range(3):
            rho += t[i, j] * PAULI_KRON[i + 1, j + 1]
    return rho / 4.0


@dataclass(eq=False)
class TwoQubitState:
    """Bloch vectors of both sides plus the 3x3 correlation matrix."""

    alpha: np.ndarray
    beta: np.ndarray
    T: np.ndarray
    _rho: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.alpha = np.asarray(self.alpha, dtype=float).reshape(3)
        self.beta = np.asarray(self.beta, dtype=float).reshape(3)
        self.T = np.asarray(self.T, dtype=float).reshape(3, 3)
        if not (
            np.all(np.isfinite(self.alpha))
            and np.all(np.isfinite(self.beta))
            and np.all(np.isfinite(self.T))
        ):
            raise InvalidStateError("Bloch parameters must be finite")

    def density_matrix(self):
        """The 4x4 density matrix (cached)."""
        if self._rho is None:
            self._rho = _density_matrix(self.alpha, self.beta, self.T)
        return self._rho

    def rho_a(self):
        """Alice's reduced state (1/2)(I + alpha.sigma)."""
        return linalg.bloch_op(1.0, self.alpha)

    def rho_b(self):
        """Bob's reduced state (1/2)(I + beta.sigma)."""
        return linalg.bloch_op(1.0, self.beta)

    def is_bell_diagonal(self, tol=1e-12):
        return (
            float(np.max(np.abs(self.alpha))) <= tol
            and float(np.max(np.abs(self.beta))) <= tol
        )

    def to_json(self):
        """JSON text with schema {"alpha": [...], "beta": [...], "T": [[...]]}."""
        return json.dumps(
            {
                "alpha": list(self.alpha),
                "beta": list(self.beta),
                "T": [list(row) for row in self.T],
            }
        )

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        try:
            return compose(data["alpha"], data["beta"], data["T"])
        except (KeyError, TypeError) as exc:
            raise InvalidStateError(f"malformed state JSON: {exc}") from exc


@dataclass(frozen=True)
class EntanglementReport:
    """Concurrence, negativity and the partial-transpose spectrum."""

    concurrence: float
    negativity: float
    pt_eigenvalues: tuple


def compose(alpha, beta, t):
    """Validated state from Bloch parameters; rejects non-PSD combinations."""
    state = TwoQubitState(alpha, beta, t)
    w = linalg.eigvalsh(state.density_matrix())
    if w[-1] < -PSD_TOL:
        raise InvalidStateError(
            f"parameters give eigenvalue {w[-1]:.3e} < -{PSD_TOL:.0e}"
        )
    return state


def decompose(rho):
    """Bloch parameters (alpha, beta, T) of a 4x4 density matrix."""
    rho = linalg.check_hermitian(rho)
    if abs(np.trace(rho).real - 1.0) > 1e-9:
        raise InvalidStateError("density matrix must have unit trace")
    w = linalg.eigvalsh(rho)
    if w[-1] < -PSD_TOL:
        raise InvalidStateError(f"density matrix has eigenvalue {w[-1]:.3e}")
    alpha = np.array(
        [np.trace(rho @ PAULI_KRON[i + 1, 0]).real for i in range(3)]
    )
    beta = np.array(
        [np.trace(rho @ PAULI_KRON[0, j + 1]).real for j in range(3)]
    )
    t = np.array(
        [
            [np.trace(rho @ PAULI_KRON[i + 1, j + 1]).real for j in range(3)]
            for i in range(3)
        ]
    )
    return alpha, beta, t


def singlet():
    """The singlet (|01> - |10>)/sqrt(2); correlation matrix -I."""
    return TwoQubitState(np.zeros(3), np.zeros(3), -np.eye(3))


def bell_diagonal_state(tdiag):
    """Bell-diagonal state with T = diag(tdiag), alpha = beta = 0."""
    t1, t2, t3 = (float(x) for x in tdiag)
    return compose(np.zeros(3), np.zeros(3), np.diag([t1, t2, t3]))


def werner_state(w):
    """Werner state: w * singlet + (1 - w) * I/4, i.e. T = -w I."""
    if not 0.0 <= w <= 1.0:
        raise InvalidStateError("Werner parameter must lie in [0, 1]")
    return TwoQubitState(np.zeros(3), np.zeros(3), -w * np.eye(3))


def hierarchy_state(s):
    """Mixture s * singlet + (1-s) |0><0| (x) I/2.

    Bloch data: alpha = (0, 0, 1-s), beta = 0, T = -s I.
    """
    if not 0.0 <= s <= 1.0:
        raise InvalidStateError("mixing parameter s must lie in [0, 1]")
    return TwoQubitState(
        np.array([0.0, 0.0, 1.0 - s]), np.zeros(3), -s * np.eye(3)
    )


def _check_theta(theta):
    if abs(math.sin(2.0 * theta)) <= SIN2T_TOL:
        raise InvalidStateError(
            "family requires sin(2 theta) != 0; got a degenerate angle"
        ) from None


def one_way_state(p, theta):
    """p |psi(theta)><psi(theta)| + (1-p) I/2 (x) rho_B(theta).

    |psi(theta)> = cos(theta)|00> + sin(theta)|11>; correlation matrix
    diag(p sin2t, -p sin2t, p).
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidStateError("mixing parameter p must lie in [0, 1]")
    _check_theta(theta)
    c2 = math.cos(2.0 * theta)
    s2 = math.sin(2.0 * theta)
    return TwoQubitState(
        np.array([0.0, 0.0, p * c2]),
        np.array([0.0, 0.0, c2]),
        np.diag([p * s2, -p * s2, p]),
    )


def one_way_povm_state(p, theta):
    """(1/2)[rho(p, theta) + rho_A(p, theta) (x) |0><0|].

    Correlation matrix diag(p sin t cos t, -p sin t cos t, p cos^2 t).
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidStateError("mixing parameter p must lie in [0, 1]")
    _check_theta(theta)
    c = math.cos(theta)
    s = math.sin(theta)
    return TwoQubitState(
        np.array([0.0, 0.0, p * math.cos(2.0 * theta)]),
        np.array([0.0, 0.0, c * c]),
        np.diag([p * s * c, -p * s * c, p * c * c]),
    )


def partial_transpose(rho):
    """Partial transpose on the second qubit of a 4x4 matrix."""
    rho = np.asarray(rho, dtype=complex)
    out = rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    return out


def partial_transpose_eigenvalues(state):
    """Eigenvalues of the partial transpose, descending."""
    return linalg.eigvalsh(partial_transpose(state.density_matrix()))


_SYSY = np.kron(linalg.SIGMA_Y, linalg.SIGMA_Y)


def concurrence(state):
    """Wootters concurrence via the spin-flip spectrum."""
    rho = state.density_matrix()
    rho_tilde = _SYSY @ rho.conj() @ _SYSY
    w, v = linalg.eigh(rho)
    w = np.maximum(w, 0.0)
    root = (v * np.sqrt(w)) @ v.conj().T
    lam, _ = linalg.eigh(root @ rho_tilde @ root)
    lam = np.maximum(lam, 0.0)
    # Rank-deficient spectra carry O(eps) noise eigenvalues whose square
    # roots would bias the result by ~1e-8; zero them out.
    lam[lam < 1e-14 * max(lam[0], 1e-300)] = 0.0
    lam = np.sqrt(lam)
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def negativity(state):
    """Negativity ||rho^T_B||_1 - 1 (twice the negative PT weight)."""
    w = partial_transpose_eigenvalues(state)
    return 2.0 * float(np.sum(np.maximum(-w, 0.0)))


def entanglement(state):
    """Concurrence, negativity and PT spectrum in one report."""
    w = partial_transpose_eigenvalues(state)
    return EntanglementReport(
        concurrence=concurrence(state),
        negativity=2.0 * float(np.sum(np.maximum(-w, 0.0))),
        pt_eigenvalues=tuple(float(x) for x in w),
    )


def random_state(seed, kind="mixed"):
    """Reproducible random state: 'pure', 'mixed' or 'bell_diagonal'.

    Mixed states follow the partial-trace (induced) measure on a doubled
    space; Bell-diagonal states are convex mixtures of the four Bell states.
    """
    rng = np.random.default_rng(seed)
    if kind == "pure":
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= math.sqrt((abs(psi) ** 2).sum())
        rho = np.outer(psi, psi.conj())
    elif kind == "mixed":
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
    elif kind == "bell_diagonal":
        probs = rng.dirichlet(np.ones(4))
        # Correlation diagonals of |Phi+>, |Phi->, |Psi+>, |Psi->.
        corners = np.array(
            [[1, -1, 1], [-1, 1, 1], [1, 1, -1], [-1, -1, -1]], dtype=float
        )
        tdiag = probs @ corners
        return TwoQubitState(np.zeros(3), np.zeros(3), np.diag(tdiag))
    else:
        raise ValueError(f"unknown state kind {kind!r}")
    alpha, beta, t = decompose(rho)
    return TwoQubitState(alpha, beta, t)
