"""Closed-form steering and Bell-nonlocality criteria.

Covers the coexistence inequality for two qubit effects, the two-vector
norm bound for unbiased assemblages, CHSH and analog-CHSH values for given
correlators, their correlation-matrix maxima (with and without the
mutually-unbiased restriction), measurement optimizers, and the
concurrence bounds on those maxima.
"""

import math
from dataclasses import dataclass

import numpy as np

from steerkit import linalg, states
from steerkit.errors import DegenerateCorrelationError, SteerkitError

DECISION_TOL = 1e-9
F_TOL = 1e-9
CHSH_BOUND = 2.0


@dataclass(frozen=True)
class ViolationReport:
    """Value of an inequality's left-hand side against its classical bound."""

    value: float
    bound: float
    violated: bool
    margin: float
    boundary: bool = False


@dataclass(frozen=True)
class CoexistenceReport:
    """Outcome of the two-effect coexistence inequality.

    ``violation = lhs - rhs`` in the direct (unnormalized) form; a positive
    violation outside the decision band means the effects are incompatible,
    i.e. the originating assemblage is steerable.
    """

    lhs: float
    rhs: float
    F1: float
    F2: float
    coexistent: bool
    violation: float
    boundary: bool = False
    sharp_branch: bool = False


def _report(value, bound, decision_tol=DECISION_TOL):
    margin = value - bound
    return ViolationReport(
        value=float(value),
        bound=float(bound),
        violated=bool(margin > decision_tol),
        margin=float(margin),
        boundary=bool(abs(margin) <= decision_tol),
    )


def _radicand(u, rn):
    # (1 + u)^2 - |r|^2 in factored form.  One factor cancels exactly when
    # the effect touches the Bloch-ball boundary (|eta| + |r| = 1); snapping
    # it to zero there keeps sqrt from amplifying 1e-16 noise to 1e-8.
    f1 = 1.0 + u - rn
    f2 = 1.0 + u + rn
    if abs(f1) <= 1e-12:
        f1 = 0.0
    return max(0.0, f1) * max(0.0, f2)


def _effect_f(eta, rn):
    return 0.5 * (
        math.sqrt(_radicand(eta, rn)) + math.sqrt(_radicand(-eta, rn))
    )


def coexistence(e1, e2, decision_tol=DECISION_TOL, f_tol=F_TOL):
    """Coexistence (joint measurability) of two binary-effect pairs.

    The effects are compatible iff

        (1 - F1^2 - F2^2)(1 - eta1^2/F1^2 - eta2^2/F2^2)
            <= (r1.r2 - eta1 eta2)^2 ,

    with F_m = (1/2)[sqrt((1+eta_m)^2 - r_m^2) + sqrt((1-eta_m)^2 - r_m^2)].
    F_m = 0 forces eta_m = 0, |r_m| = 1 (a sharp effect); that limit is
    decided by commutation of the two measurements instead of the singular
    quotient form.
    """
    r1 = e1.r_vec()
    r2 = e2.r_vec()
    eta1, eta2 = e1.eta, e2.eta
    f1 = _effect_f(eta1, e1.r_norm())
    f2 = _effect_f(eta2, e2.r_norm())
    dot = float(r1 @ r2)
    rhs = (dot - eta1 * eta2) ** 2

    if f1 > f_tol and f2 > f_tol:
        lhs = (1.0 - f1 * f1 - f2 * f2) * (
            1.0 - (eta1 / f1) ** 2 - (eta2 / f2) ** 2
        )
        violation = lhs - rhs
        return CoexistenceReport(
            lhs=float(lhs),
            rhs=float(rhs),
            F1=f1,
            F2=f2,
            coexistent=bool(violation <= decision_tol),
            violation=float(violation),
            boundary=bool(abs(violation) <= decision_tol),
        )

    # Sharp branch: a projective effect coexists with another binary effect
    # iff they commute, i.e. the Bloch vectors are parallel.
    cross = np.cross(r1, r2)
    commute = math.sqrt(float(cross @ cross)) <= 1e-9
    # Report the quotient-free (multiplied-through) sides for reference.
    lhs = (1.0 - f1 * f1 - f2 * f2) * (
        f1 * f1 * f2 * f2 - eta1 * eta1 * f2 * f2 - eta2 * eta2 * f1 * f1
    )
    rhs_m = rhs * f1 * f1 * f2 * f2
    return CoexistenceReport(
        lhs=float(lhs),
        rhs=float(rhs_m),
        F1=f1,
        F2=f2,
        coexistent=commute,
        violation=float(lhs - rhs_m),
        boundary=False,
        sharp_branch=True,
    )


def lemma1_gamma_bound(gamma1, gamma2, decision_tol=DECISION_TOL):
    """Norm bound |g1 + g2| + |g1 - g2| <= 2 on assemblage vectors.

    Violation witnesses steering; for unbiased, centered assemblages the
    bound is also necessary.
    """
    g1 = np.asarray(gamma1, dtype=float)
    g2 = np.asarray(gamma2, dtype=float)
    value = math.sqrt(float((g1 + g2) @ (g1 + g2))) + math.sqrt(
        float((g1 - g2) @ (g1 - g2))
    )
    return _report(value, CHSH_BOUND, decision_tol)


def _check_correlators(e):
    e = np.asarray(e, dtype=float).reshape(2, 2)
    if np.max(np.abs(e)) > 1.0 + 1e-9:
        raise SteerkitError("correlators must lie in [-1, 1]")
    return e


def chsh_value(correlators, decision_tol=DECISION_TOL):
    """CHSH value maximized over the 8 outcome/setting relabelings."""
    e = _check_correlators(correlators)
    total = float(e.sum())
    best = max(abs(total - 2.0 * e[m, n]) for m in range(2) for n in range(2))
    return _report(best, CHSH_BOUND, decision_tol)


def analog_chsh_value(correlators, b1, b2, decision_tol=DECISION_TOL):
    """Analog CHSH value for given correlators and Bob axes.

    Combines correlator-weighted duals of Bob's measurement vectors:

        |sum_n <(A1 + A2) B_n> b'_n| + |sum_n <(A1 - A2) B_n> b'_n| <= 2 .

    For orthogonal Bob axes this reduces to the square-root form in terms
    of the raw correlators.
    """
    e = _check_correlators(correlators)
    b1p, b2p = linalg.dual_basis(b1, b2)
    g_plus = (e[0, 0] + e[1, 0]) * b1p + (e[0, 1] + e[1, 1]) * b2p
    g_minus = (e[0, 0] - e[1, 0]) * b1p + (e[0, 1] - e[1, 1]) * b2p
    value = math.sqrt(float(g_plus @ g_plus)) + math.sqrt(
        float(g_minus @ g_minus)
    )
    return _report(value, CHSH_BOUND, decision_tol)


def _top_two_tt_eigenvalues(t):
    sv, _, _ = linalg.svd3(t)
    return sv[0] ** 2, sv[1] ** 2


def chsh_max(t):
    """Maximal CHSH value 2 sqrt(l1 + l2) over all measurement choices.

    l1, l2 are the two largest eigenvalues of T T^T; the inequality is
    violable iff l1 + l2 > 1.
    """
    l1, l2 = _top_two_tt_eigenvalues(np.asarray(t, dtype=float))
    return 2.0 * math.sqrt(l1 + l2)


def analog_chsh_max(t):
    """Maximal analog-CHSH value; coincides with the CHSH maximum."""
    return chsh_max(t)


def chsh_max_mub(t):
    """Maximal CHSH value when both parties use mutually unbiased axes.

    Equals sqrt2 (sqrt(l1) + sqrt(l2)); never exceeds the unrestricted
    maximum and matches it exactly when l1 = l2.
    """
    l1, l2 = _top_two_tt_eigenvalues(np.asarray(t, dtype=float))
    return math.sqrt(2.0) * (math.sqrt(l1) + math.sqrt(l2))


def optimal_measurements(t, rank_tol=1e-9):
    """Axes (a1, a2, b1, b2) attaining the analog-CHSH maximum.

    Alice's axes are the top-two left singular vectors of T (mutually
    unbiased); Bob's are the corresponding right singular vectors, an
    orthonormal basis of the plane spanned by T^T a1 and T^T a2.
    """
    t = np.asarray(t, dtype=float)
    sv, u, v = linalg.svd3(t)
    if sv[1] * sv[1] <= rank_tol * max(1.0, sv[0] * sv[0]):
        raise DegenerateCorrelationError(
            "correlation matrix has rank < 2; no two-dimensional image"
        )
    return u[:, 0].copy(), u[:, 1].copy(), v[:, 0].copy(), v[:, 1].copy()


def one_way_unsteerable_condition(p, theta):
    """Whether cos^2(2 theta) >= (2p - 1) / ((2 - p) p^3).

    Holding means the one-way family member is unsteerable from Bob to
    Alice under arbitrary projective measurements.  p = 0 is trivially
    unsteerable (the right-hand side is negative).
    """
    if not 0.0 <= p <= 1.0:
        raise SteerkitError("p must lie in [0, 1]")
    if p == 0.0:
        return True
    lhs = math.cos(2.0 * theta) ** 2
    rhs = (2.0 * p - 1.0) / ((2.0 - p) * p**3)
    return bool(lhs >= rhs)


@dataclass(frozen=True)
class BoundsRecord:
    """Concurrence bounds on the maximal (analog-)CHSH values."""

    concurrence: float
    s_value: float
    s_mub: float
    lower_ok: bool
    upper_ok: bool
    lower_mub_ok: bool
    upper_mub_ok: bool
    bell_diagonal: bool
    bd_lower_ok: bool
    bd_lower_mub_ok: bool


def concurrence_bounds_check(state, tol=1e-9):
    """Check 2 sqrt2 C <= S <= 2 sqrt(1 + C^2) and the MUB/Bell-diagonal variants.

    The Bell-diagonal lower bound (2 sqrt2 / 3)(1 + 2C) applies only to
    entangled states with vanishing local Bloch vectors.
    """
    c = states.concurrence(state)
    s = chsh_max(state.T)
    sm = chsh_max_mub(state.T)
    lower = 2.0 * math.sqrt(2.0) * c
    upper = 2.0 * math.sqrt(1.0 + c * c)
    upper_mub = math.sqrt(2.0) * (1.0 + c)
    is_bd = state.is_bell_diagonal(tol=1e-9) and c > tol
    bd_lower = (2.0 * math.sqrt(2.0) / 3.0) * (1.0 + 2.0 * c)
    return BoundsRecord(
        concurrence=c,
        s_value=s,
        s_mub=sm,
        lower_ok=bool(s >= lower - tol),
        upper_ok=bool(s <= upper + tol),
        lower_mub_ok=bool(sm >= lower - tol),
        upper_mub_ok=bool(sm <= upper_mub + tol),
        bell_diagonal=is_bd,
        bd_lower_ok=bool((not is_bd) or (s >= bd_lower - tol)),
        bd_lower_mub_ok=bool((not is_bd) or (sm >= bd_lower - tol)),
    )
