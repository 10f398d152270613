"""Qubit measurements and the operator span of a measurement collection.

Binary measurements are carried in (eta, r) form: the + effect is
(1/2)[(1 + eta) I + r . sigma].  Projective measurements are the eta = 0,
|r| = 1 case.  The span of all effects in Bob's collection decides which
restricted hidden-state model is relevant.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from steerkit import linalg
from steerkit.errors import SteerkitError
from steerkit.linalg import PAULI

AXIS_WARN_TOL = 1e-6
SPAN_RANK_TOL = 1e-9
MEMBERSHIP_TOL = 1e-9

#: Named measurement axes accepted by the CLI.
NAMED_AXES = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}


def unit_axis(v):
    """Normalize a measurement axis, warning if it was off-unit by > 1e-6."""
    v = np.asarray(v, dtype=float).reshape(3)
    n = math.sqrt(float(v @ v))
    if n < 1e-12:
        raise SteerkitError("measurement axis must be nonzero")
    if abs(n - 1.0) > AXIS_WARN_TOL:
        warnings.warn(
            f"measurement axis renormalized (|axis| - 1 = {n - 1.0:.2e})",
            stacklevel=2,
        )
    return v / n


@dataclass(frozen=True)
class QubitEffect:
    """A binary-measurement effect (1/2)[(1 + eta) I + r . sigma]."""

    eta: float
    r: tuple

    def __post_init__(self):
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(
            self, "r", tuple(float(x) for x in np.asarray(self.r).reshape(3))
        )
        if abs(self.eta) + self.r_norm() > 1.0 + 1e-9:
            raise SteerkitError(
                f"effect violates |eta| + |r| <= 1 "
                f"(got {abs(self.eta) + self.r_norm():.12g})"
            )

    def r_vec(self):
        return np.array(self.r)

    def r_norm(self):
        return math.sqrt(sum(x * x for x in self.r))

    def matrix(self):
        return linalg.bloch_op(1.0 + self.eta, self.r_vec())

    def complement(self):
        """The partner effect of the binary measurement: I - this one."""
        return QubitEffect(-self.eta, tuple(-x for x in self.r))

    @classmethod
    def from_matrix(cls, op, tol=1e-9):
        c = linalg.pauli_coords(op)
        eff = cls(c[0] - 1.0, tuple(c[1:]))
        if np.max(np.abs(linalg.pauli_coords(op) - c)) > tol:
            raise SteerkitError("effect matrix is not Hermitian")
        return eff


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """+-1-outcome projective measurement along a unit axis."""

    axis: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "axis", tuple(float(x) for x in unit_axis(self.axis))
        )

    def axis_vec(self):
        return np.array(self.axis)

    def effects(self):
        a = self.axis_vec()
        return (
            QubitEffect(0.0, tuple(a)),
            QubitEffect(0.0, tuple(-a)),
        )


@dataclass(frozen=True)
class BinaryPovm:
    """General binary qubit measurement, given by its + effect."""

    plus: QubitEffect

    def effects(self):
        return (self.plus, self.plus.complement())


@dataclass(frozen=True)
class TrineMeasurement:
    """Three-outcome measurement with effects (I + c_j . sigma)/3."""

    vectors: tuple

    def __post_init__(self):
        vecs = tuple(tuple(float(x) for x in unit_axis(v)) for v in self.vectors)
        if len(vecs) != 3:
            raise SteerkitError("a trine needs exactly three vectors")
        total = np.sum([np.array(v) for v in vecs], axis=0)
        if np.max(np.abs(total)) > 1e-9:
            raise SteerkitError("trine vectors must sum to zero")
        object.__setattr__(self, "vectors", vecs)

    def effects(self):
        # (I + c.sigma)/3 has Pauli components (2/3, 2c/3).
        return tuple(
            QubitEffect(-1.0 / 3.0, tuple(np.array(c) * (2.0 / 3.0)))
            for c in self.vectors
        )


def trine_xz():
    """The x-z-plane trine: (0,0,1), (sqrt3,0,-1)/2, (-sqrt3,0,-1)/2."""
    rt3 = math.sqrt(3.0)
    return TrineMeasurement(
        (
            (0.0, 0.0, 1.0),
            (rt3 / 2.0, 0.0, -0.5),
            (-rt3 / 2.0, 0.0, -0.5),
        )
    )


@dataclass(frozen=True)
class RestrictedSpan:
    """Orthonormal (Hilbert-Schmidt) basis of an operator subspace.

    ``coords`` holds the basis row-wise in the orthonormal operator basis
    {sigma_k / sqrt2}; ``dim`` is the span dimension (1..4).
    """

    coords: np.ndarray
    dim: int

    def basis(self):
        """Basis operators Pi_j with Tr(Pi_i Pi_j) = delta_ij."""
        return [
            sum(self.coords[j, k] * PAULI[k] for k in range(4)) / math.sqrt(2.0)
            for j in range(self.dim)
        ]

    def projector4(self):
        """4x4 projector onto the span, in sigma_k/sqrt2 coordinates."""
        return self.coords.T @ self.coords

    def project_op(self, x):
        """Orthogonal projection of a 2x2 Hermitian operator onto the span."""
        c = linalg.pauli_coords(x)
        return linalg.op_from_coords(self.projector4() @ c)

    def contains(self, x, tol=MEMBERSHIP_TOL):
        c = linalg.pauli_coords(x)
        resid = c - self.projector4() @ c
        return math.sqrt(float(resid @ resid)) / max(
            1.0, math.sqrt(float(c @ c))
        ) <= tol


def _effect_coord_rows(measurements):
    rows = []
    for m in measurements:
        if isinstance(m, QubitEffect):
            effects = (m, m.complement())
        else:
            effects = m.effects()
        for e in effects:
            rows.append(
                np.array([1.0 + e.eta, *e.r]) / math.sqrt(2.0)
            )
    return np.array(rows)


def span_of(measurements, rank_tol=SPAN_RANK_TOL):
    """Span of all effects of the given measurements.

    The dimension comes from the rank of the effects' Gram matrix with
    relative tolerance ``rank_tol``; the returned basis is orthonormal
    under the Hilbert-Schmidt inner product.
    """
    if not measurements:
        raise SteerkitError("span_of needs at least one measurement")
    rows = _effect_coord_rows(measurements)
    # 4x4 real symmetric scatter of effect coordinates; its rank equals the
    # rank of the effects' Gram matrix.
    scatter = rows.T @ rows
    w, v = linalg.eigh(scatter.astype(complex))
    cut = rank_tol * max(w[0], 0.0)
    dim = int(np.sum(w > cut))
    coords = np.real(v[:, :dim].T)
    return RestrictedSpan(coords=coords, dim=dim)


def complexity_cost(parties):
    """Number of joint outcome patterns: prod over parties of summed outcomes.

    ``parties`` lists, per party, the outcome count of each setting, e.g.
    ``[[2, 2], [3]]`` for two binary settings against one trine.
    """
    if len(parties) < 2:
        raise SteerkitError("complexity cost needs at least two parties")
    total = 1
    for settings in parties:
        if len(settings) < 1:
            raise SteerkitError("every party needs at least one setting")
        for o in settings:
            if int(o) != o or o < 2:
                raise SteerkitError(
                    "outcome counts must be integers with at least 2 outcomes"
                )
        total *= int(sum(int(o) for o in settings))
    return total
