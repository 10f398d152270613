"""Bob's conditional-state assemblages and steering-equivalent observables.

For Alice axes a_m the subnormalized conditional states are

    rho_{+-|m} = (1/4)[(1 +- alpha.a_m) I + beta.sigma +- gamma_m.sigma],

with gamma_m = T^T a_m.  Restricting onto the span of Bob's effects and
conjugating with the inverse square root of the restricted reduced state
turns steerability into coexistence of two qubit effects.
"""

import math
from dataclasses import dataclass

import numpy as np

from steerkit import linalg
from steerkit.errors import InconsistentAssemblageError
from steerkit.measurements import QubitEffect, RestrictedSpan, unit_axis

PSD_TOL = 1e-10
CONSISTENCY_TOL = 1e-10
PURITY_RANK_TOL = 1e-9


@dataclass(frozen=True)
class Assemblage:
    """Two binary ensembles for Bob, in Bloch form.

    ``nus[m] = alpha . a_m`` and ``gammas[m] = T^T a_m``; ``beta`` is Bob's
    Bloch vector.  Element (m, s) for sign s = +-1 is
    (1/4)[(1 + s nu_m) I + (beta + s gamma_m) . sigma].
    """

    beta: tuple
    nus: tuple
    gammas: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "beta", tuple(float(x) for x in np.asarray(self.beta).reshape(3))
        )
        object.__setattr__(self, "nus", tuple(float(x) for x in self.nus))
        object.__setattr__(
            self,
            "gammas",
            tuple(tuple(float(x) for x in np.asarray(g).reshape(3)) for g in self.gammas),
        )
        for m, (nu, g) in enumerate(zip(self.nus, self.gammas)):
            for s in (1.0, -1.0):
                vec = np.array(self.beta) + s * np.array(g)
                if 1.0 + s * nu < math.sqrt(float(vec @ vec)) - PSD_TOL:
                    raise InconsistentAssemblageError(
                        f"element ({m}, {s:+.0f}) is not positive semidefinite"
                    )

    @property
    def n_settings(self):
        return len(self.nus)

    def gamma(self, m):
        return np.array(self.gammas[m])

    def element(self, m, sign):
        """Subnormalized conditional state as a 2x2 matrix."""
        s = float(sign)
        vec = np.array(self.beta) + s * self.gamma(m)
        return 0.5 * linalg.bloch_op(1.0 + s * self.nus[m], vec)

    def rho_b(self):
        return linalg.bloch_op(1.0, np.array(self.beta))

    def ensembles(self):
        """Matrices grouped per setting: [[rho_{+|m}, rho_{-|m}], ...]."""
        return [
            [self.element(m, +1), self.element(m, -1)]
            for m in range(self.n_settings)
        ]

    def check_consistency(self, tol=CONSISTENCY_TOL):
        rb = self.rho_b()
        for m in range(self.n_settings):
            dev = np.max(np.abs(self.element(m, +1) + self.element(m, -1) - rb))
            if dev > tol:
                raise InconsistentAssemblageError(
                    f"ensemble {m} sums to the reduced state only within {dev:.3e}"
                )
        return True


@dataclass(frozen=True)
class RestrictedAssemblage(Assemblage):
    """Assemblage projected onto a restricted operator span."""

    span: RestrictedSpan = None


@dataclass(frozen=True)
class SeoPair:
    """Steering-equivalent observables of a two-setting assemblage."""

    effects: tuple  # ((O_{+|1}, O_{-|1}), (O_{+|2}, O_{-|2}))

    def plus(self, m):
        return self.effects[m][0]

    def etas(self):
        return tuple(pair[0].eta for pair in self.effects)

    def r_vectors(self):
        return tuple(pair[0].r_vec() for pair in self.effects)


@dataclass(frozen=True)
class UnsteerableByPurity:
    """Verdict: the restricted reduced state is pure, so steering is impossible."""

    beta_tilde: tuple


def conditional_states(state, alice_axes):
    """Assemblage induced on Bob by Alice's projective axes."""
    axes = [unit_axis(a) for a in alice_axes]
    nus = tuple(float(state.alpha @ a) for a in axes)
    gammas = tuple(state.T.T @ a for a in axes)
    asm = Assemblage(beta=tuple(state.beta), nus=nus, gammas=gammas)
    asm.check_consistency()
    return asm


def restrict(assemblage, span):
    """Orthogonal projection of every assemblage element onto the span.

    The identity always lies in the span of a full measurement, so only the
    Bloch-vector parts are affected; the projected data stay a consistent
    assemblage for the projected reduced state.
    """
    proj = span.projector4()
    vec_beta = np.concatenate([[0.0], assemblage.beta])
    beta_t = (proj @ vec_beta)[1:]
    gammas_t = []
    for g in assemblage.gammas:
        vec = np.concatenate([[0.0], g])
        gammas_t.append(tuple((proj @ vec)[1:]))
    return RestrictedAssemblage(
        beta=tuple(beta_t),
        nus=assemblage.nus,
        gammas=tuple(gammas_t),
        span=span,
    )


def steering_equivalent_observables(ra, rank_tol=PURITY_RANK_TOL):
    """SEOs of a restricted two-setting assemblage, or a purity verdict.

    Conjugates each element with the pseudo-inverse square root of the
    restricted reduced state.  A rank-deficient reduced state means it is
    pure and the assemblage cannot be steerable; that verdict is returned
    instead of ill-conditioned effects.
    """
    rb = ra.rho_b()
    root, pinv_root, rank = linalg.psd_sqrt_pinv(rb, rank_tol=rank_tol)
    if rank < 2:
        return UnsteerableByPurity(beta_tilde=ra.beta)
    pairs = []
    for m in range(ra.n_settings):
        pair = []
        for sign in (+1, -1):
            o = pinv_root @ ra.element(m, sign) @ pinv_root
            c = linalg.pauli_coords(o)
            eta = c[0] - 1.0
            r = c[1:]
            # Conjugation amplifies roundoff near a pure reduced state; pull
            # an epsilon-overshooting effect back onto the valid boundary.
            excess = abs(eta) + math.sqrt(float(r @ r)) - 1.0
            if 0.0 < excess <= 1e-6:
                r = r * ((1.0 - abs(eta)) / (excess + 1.0 - abs(eta)))
            pair.append(QubitEffect(eta, tuple(r)))
        pairs.append(tuple(pair))
    return SeoPair(effects=tuple(pairs))
