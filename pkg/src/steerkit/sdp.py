"""Hidden-state feasibility as second-order-cone programming.

An assemblage admits a local-hidden-state model iff there are PSD
operators sigma_lambda, one per deterministic strategy, with

    sum_lambda D(a|A, lambda) sigma_lambda = rho_{a|A}   (all A, a)
    Tr(sum_lambda sigma_lambda) = 1 .

In Pauli components each sigma_lambda is a 4-vector constrained to the
second-order cone (trace bounds the Bloch norm), so the search is a small
SOCP feasibility problem.  The restricted variant equates only the inner
products against a basis of Bob's effect span.

Feasibility is decided through a minimum-slack formulation

    minimize t   s.t.   constraints hold,  sigma_lambda + t I/2 >= 0 ,

solved by a self-contained primal-dual interior-point method with
Nesterov-Todd scaling.  The optimum t* <= 0 certifies a model (with the
ensemble read off the solution); t* > 0 certifies steering, with the dual
solution as a separating witness.
"""

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from steerkit import linalg
from steerkit.errors import InconsistentAssemblageError, SizeOverflowError
from steerkit.linalg import PAULI

# Verdict rule: feasible iff t* <= 0.1 * feas_tol, infeasible iff
# t* > 10 * feas_tol, boundary in between -- i.e. "boundary" marks exactly
# those instances whose verdict would flip as feas_tol sweeps a decade
# either side of the default 1e-8.
FEAS_TOL = 1e-8
MAX_STRATEGIES = 10**6


@dataclass(frozen=True)
class DeterministicStrategySet:
    """All deterministic outcome assignments lambda: setting -> outcome."""

    outcome_counts: tuple
    table: np.ndarray  # shape (n_strategies, n_settings), outcome indices

    @property
    def n_strategies(self):
        return self.table.shape[0]

    @property
    def n_settings(self):
        return self.table.shape[1]

    def d(self, outcome, setting, strategy):
        """Indicator D(a|A, lambda)."""
        return 1.0 if self.table[strategy, setting] == outcome else 0.0


def strategy_table(outcome_counts):
    """Strategy set for per-setting outcome counts (mixed radix)."""
    counts = tuple(int(k) for k in outcome_counts)
    if any(k < 1 for k in counts):
        raise SizeOverflowError("every setting needs at least one outcome")
    total = math.prod(counts)
    if total > MAX_STRATEGIES:
        raise SizeOverflowError(
            f"{total} strategies exceed the supported maximum {MAX_STRATEGIES}"
        )
    table = np.array(
        list(itertools.product(*(range(k) for k in counts))), dtype=np.int64
    ).reshape(total, len(counts))
    return DeterministicStrategySet(outcome_counts=counts, table=table)


def enumerate_strategies(settings, outcomes):
    """All K^N deterministic strategies for N settings with K outcomes."""
    if settings < 1 or outcomes < 1:
        raise SizeOverflowError("need at least one setting and one outcome")
    return strategy_table([outcomes] * settings)


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of a hidden-state feasibility solve.

    ``residual`` is the minimum slack t*: nonpositive within tolerance for
    model-admitting assemblages, positive for steerable ones.  ``boundary``
    status flags verdicts that would flip as the tolerance sweeps over
    [1e-9, 1e-7].
    """

    status: str
    residual: float
    ensemble: tuple | None
    certificate: dict | None
    iterations: int
    solver_accuracy: float

    @property
    def feasible(self):
        return self.status == "feasible"

    def to_json(self):
        cert = None
        if self.certificate is not None:
            cert = {
                "constant": self.certificate["constant"],
                "separating_value": self.certificate["separating_value"],
                "witness": [
                    {
                        "setting": s,
                        "outcome": a,
                        "operator_re": np.real(f).tolist(),
                        "operator_im": np.imag(f).tolist(),
                    }
                    for (s, a), f in sorted(self.certificate["witness"].items())
                ],
            }
        ensemble = None
        if self.ensemble is not None:
            ensemble = [
                {"re": np.real(s).tolist(), "im": np.imag(s).tolist()}
                for s in self.ensemble
            ]
        return json.dumps(
            {
                "status": self.status,
                "residual": self.residual,
                "iterations": self.iterations,
                "solver_accuracy": self.solver_accuracy,
                "ensemble": ensemble,
                "certificate": cert,
            },
            sort_keys=True,
        )


def _ensembles_of(assemblage):
    if hasattr(assemblage, "ensembles"):
        assemblage.check_consistency()
        return assemblage.ensembles()
    ensembles = [[np.asarray(e, dtype=complex) for e in ens] for ens in assemblage]
    ref = None
    for ens in ensembles:
        tot = sum(ens)
        if ref is None:
            ref = tot
        elif np.max(np.abs(tot - ref)) > 1e-9:
            raise InconsistentAssemblageError(
                "ensembles do not share a common reduced state"
            )
    return ensembles


def _build_rows(ensembles, strategies, templates):
    """Constraint rows for functionals Tr(M rho_{a|A}) plus normalization.

    ``templates`` maps each constraint operator M to its Pauli components;
    one row per (setting, outcome, template).  Returns the matrix, right
    sides and per-row (setting, outcome, template-index) metadata.
    """
    n_set = len(ensembles)
    big_l = strategies.n_strategies
    rows = []
    rhs = []
    meta = []
    for s in range(n_set):
        for a in range(len(ensembles[s])):
            target = linalg.pauli_coords(ensembles[s][a])
            mask = strategies.table[:, s] == a
            for j, tmpl in enumerate(templates):
                row = np.zeros(4 * big_l)
                for lam in np.nonzero(mask)[0]:
                    row[4 * lam : 4 * lam + 4] = tmpl
                rows.append(row)
                rhs.append(float(tmpl @ target))
                meta.append((s, a, j))
    norm_row = np.zeros(4 * big_l)
    norm_row[0::4] = 1.0
    rows.append(norm_row)
    rhs.append(1.0)
    meta.append(None)
    return np.array(rows), np.array(rhs), meta


def _reduce_rows(a_mat, b_vec, tol=1e-12):
    """Orthonormalize rows (two-pass MGS), dropping dependent ones.

    Also returns the combination matrix R with A_red = R A, b_red = R b, so
    dual certificates can be mapped back to original row coordinates.  A
    dependent row with inconsistent right side rejects the input.
    """
    m = a_mat.shape[0]
    scale = max(1.0, float(np.max(np.abs(a_mat))))
    kept, kept_rhs, kept_comb = [], [], []
    for i in range(m):
        v = a_mat[i].astype(float).copy()
        r = float(b_vec[i])
        comb = np.zeros(m)
        comb[i] = 1.0
        for _ in range(2):
            for u, ur, uc in zip(kept, kept_rhs, kept_comb):
                coef = float(v @ u)
                v -= coef * u
                r -= coef * ur
                comb -= coef * uc
        nv = math.sqrt(float(v @ v))
        if nv > tol * scale:
            kept.append(v / nv)
            kept_rhs.append(r / nv)
            kept_comb.append(comb / nv)
        elif abs(r) > 1e-9:
            raise InconsistentAssemblageError(
                "constraints are linearly inconsistent; assemblage rejected"
            )
    return np.array(kept), np.array(kept_rhs), np.array(kept_comb)


# --- second-order-cone helpers (blocks of length 4, plus one scalar) ---


def _jmul(v):
    out = -v.copy()
    out[0] = v[0]
    return out


def _soc_step(x, d):
    """Largest step keeping x + alpha d in the cone (x strictly inside)."""
    c2 = d[0] * d[0] - float(d[1:] @ d[1:])
    c1 = x[0] * d[0] - float(x[1:] @ d[1:])
    c0 = x[0] * x[0] - float(x[1:] @ x[1:])
    alpha = math.inf
    if abs(c2) < 1e-300:
        if c1 < 0.0:
            alpha = -c0 / (2.0 * c1)
    else:
        disc = c1 * c1 - c2 * c0
        if disc >= 0.0:
            sq = math.sqrt(disc)
            for root in ((-c1 - sq) / c2, (-c1 + sq) / c2):
                if root > 0.0:
                    alpha = min(alpha, root)
    if d[0] < 0.0:
        alpha = min(alpha, -x[0] / d[0])
    return alpha


def _cholesky(a):
    n = a.shape[0]
    low = np.zeros_like(a)
    for i in range(n):
        s = a[i, i] - low[i, :i] @ low[i, :i]
        if s <= 0.0:
            raise ArithmeticError("matrix is not positive definite")
        low[i, i] = math.sqrt(s)
        if i + 1 < n:
            low[i + 1 :, i] = (a[i + 1 :, i] - low[i + 1 :, :i] @ low[i, :i]) / low[
                i, i
            ]
    return low


def _chol_solve(low, rhs):
    n = low.shape[0]
    y = np.zeros(n)
    for i in range(n):
        y[i] = (rhs[i] - low[i, :i] @ y[:i]) / low[i, i]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - low[i + 1 :, i] @ x[i + 1 :]) / low[i, i]
    return x


class _Scaling:
    """Nesterov-Todd scaling data for the cone product (Q4)^L x R+.

    The scaling point wbar (unit hyperbolic norm) gives the quadratic
    representation W^2 = beta^2 (2 wbar wbar^T - J); the matrix W itself is
    the hyperbolic Householder beta (2 v v^T - J) built from the Jordan
    square root v of wbar.
    """

    def __init__(self, x, z, n_cones):
        self.n_cones = n_cones
        self.beta = np.zeros(n_cones)
        self.wbar = np.zeros((n_cones, 4))
        self.v = np.zeros((n_cones, 4))
        self.jv = np.zeros((n_cones, 4))
        self.lam = np.zeros(len(x))
        for k in range(n_cones):
            sl = slice(4 * k, 4 * k + 4)
            xx, zz = x[sl], z[sl]
            ax = math.sqrt(max(1e-300, xx[0] ** 2 - float(xx[1:] @ xx[1:])))
            az = math.sqrt(max(1e-300, zz[0] ** 2 - float(zz[1:] @ zz[1:])))
            gam = math.sqrt(max(1e-300, 0.5 * (1.0 + float(xx @ zz) / (ax * az))))
            wbar = (xx / ax + _jmul(zz) / az) / (2.0 * gam)
            v = wbar.copy()
            v[0] += 1.0
            v /= math.sqrt(2.0 * (1.0 + wbar[0]))
            self.beta[k] = math.sqrt(ax / az)
            self.wbar[k] = wbar
            self.v[k] = v
            self.jv[k] = _jmul(v)
            self.lam[sl] = self.beta[k] * (
                2.0 * v * float(v @ zz) - _jmul(zz)
            )
        self.w_tau = math.sqrt(x[-1] / z[-1])
        self.lam[-1] = math.sqrt(x[-1] * z[-1])

    def apply_w(self, v):
        out = np.empty_like(v)
        for k in range(self.n_cones):
            sl = slice(4 * k, 4 * k + 4)
            vv = v[sl]
            out[sl] = self.beta[k] * (
                2.0 * self.v[k] * float(self.v[k] @ vv) - _jmul(vv)
            )
        out[-1] = self.w_tau * v[-1]
        return out

    def apply_w2(self, v):
        out = np.empty_like(v)
        for k in range(self.n_cones):
            sl = slice(4 * k, 4 * k + 4)
            vv = v[sl]
            wb = self.wbar[k]
            out[sl] = (self.beta[k] ** 2) * (
                2.0 * wb * float(wb @ vv) - _jmul(vv)
            )
        out[-1] = self.w_tau**2 * v[-1]
        return out

    def apply_winv(self, v):
        out = np.empty_like(v)
        for k in range(self.n_cones):
            sl = slice(4 * k, 4 * k + 4)
            vv = v[sl]
            out[sl] = (
                2.0 * self.jv[k] * float(self.jv[k] @ vv) - _jmul(vv)
            ) / self.beta[k]
        out[-1] = v[-1] / self.w_tau
        return out

    def lam_solve(self, d):
        """g with lam o g = d (Jordan product per cone)."""
        out = np.empty_like(d)
        for k in range(self.n_cones):
            sl = slice(4 * k, 4 * k + 4)
            lm, dd = self.lam[sl], d[sl]
            det = max(1e-300, lm[0] ** 2 - float(lm[1:] @ lm[1:]))
            g0 = (lm[0] * dd[0] - float(lm[1:] @ dd[1:])) / det
            out[sl][0] = g0
            out[sl][1:] = (dd[1:] - lm[1:] * g0) / lm[0]
        out[-1] = d[-1] / self.lam[-1]
        return out

    def lam_sq(self):
        out = np.empty_like(self.lam)
        for k in range(self.n_cones):
            sl = slice(4 * k, 4 * k + 4)
            lm = self.lam[sl]
            out[sl][0] = float(lm @ lm)
            out[sl][1:] = 2.0 * lm[0] * lm[1:]
        out[-1] = self.lam[-1] ** 2
        return out

    def jordan(self, u, v):
        out = np.empty_like(u)
        for k in range(self.n_cones):
            sl = slice(4 * k, 4 * k + 4)
            uu, vv = u[sl], v[sl]
            out[sl][0] = float(uu @ vv)
            out[sl][1:] = uu[0] * vv[1:] + vv[0] * uu[1:]
        out[-1] = u[-1] * v[-1]
        return out


def _max_step(v, dv, n_cones):
    alpha = math.inf
    for k in range(n_cones):
        sl = slice(4 * k, 4 * k + 4)
        alpha = min(alpha, _soc_step(v[sl], dv[sl]))
    if dv[-1] < 0.0:
        alpha = min(alpha, -v[-1] / dv[-1])
    return alpha


def socp_min_slack(a_mat, b_vec, n_cones, max_iter=120):
    """Minimize the cone slack t for A x = b, x_lambda + t e0 in Q4.

    Returns a dict with the optimum ``t``, the shifted primal blocks ``u``
    (x = u - t e0 blockwise), the dual vector ``y`` (certificate basis),
    iteration count and achieved accuracy.
    """
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _socp_min_slack_core(a_mat, b_vec, n_cones, max_iter)


def _socp_min_slack_core(a_mat, b_vec, n_cones, max_iter):
    m, n_u = a_mat.shape
    aebar = a_mat[:, 0::4] @ np.ones(n_cones)
    atil = np.concatenate([a_mat, -aebar[:, None]], axis=1)
    btil = b_vec - 2.0 * aebar
    n = n_u + 1
    c = np.zeros(n)
    c[-1] = 1.0
    nu = n_cones + 1

    blocks = [atil[:, 4 * k : 4 * k + 4] for k in range(n_cones)]
    # B J B^T per cone is constant across iterations.
    bjbt = [blk @ np.diag([1.0, -1.0, -1.0, -1.0]) @ blk.T for blk in blocks]
    a_tau = atil[:, -1]
    tau_outer = np.outer(a_tau, a_tau)

    x = np.zeros(n)
    z = np.zeros(n)
    for k in range(n_cones):
        x[4 * k] = 1.0
        z[4 * k] = 1.0
    x[-1] = 1.0
    z[-1] = 1.0
    y = np.zeros(m)

    b_scale = 1.0 + math.sqrt(float(btil @ btil))
    best = None
    stall = 0
    for it in range(max_iter):
        rp = btil - atil @ x
        rd = c - atil.T @ y - z
        gap = float(x @ z)
        mu = gap / nu
        pres = math.sqrt(float(rp @ rp)) / b_scale
        dres = math.sqrt(float(rd @ rd)) / 2.0
        accuracy = max(pres, dres, mu)
        if best is None or accuracy < 0.9 * best[0]:
            best = (accuracy, x.copy(), y.copy(), z.copy(), it)
            stall = 0
        else:
            stall += 1
        if pres < 1e-11 and dres < 1e-11 and mu < 1e-12:
            break
        if stall >= 8:
            break

        sc = _Scaling(x, z, n_cones)
        # KKT reduced matrix  Atil W^2 Atil^T, assembled per cone:
        # W^2 = beta^2 (2 wbar wbar^T - J).
        kkt = (sc.w_tau**2) * tau_outer
        for k in range(n_cones):
            p1 = blocks[k] @ sc.wbar[k]
            kkt += (sc.beta[k] ** 2) * (2.0 * np.outer(p1, p1) - bjbt[k])
        jitter = 0.0
        low = None
        for _ in range(8):
            try:
                low = _cholesky(kkt + jitter * np.eye(m))
                break
            except ArithmeticError:
                jitter = max(jitter * 100.0, 1e-14 * np.trace(kkt) / m)
        if low is None:
            break

        def direction(d_c):
            g = sc.lam_solve(d_c)
            wg = sc.apply_w(g)
            dy = _chol_solve(low, rp - atil @ (wg - sc.apply_w2(rd)))
            dz = rd - atil.T @ dy
            dx = wg - sc.apply_w2(dz)
            return dx, dy, dz

        # Predictor (affine) direction: lam_solve(-lam o lam) = -lam.
        dx_a, dy_a, dz_a = direction(-sc.lam_sq())
        if not (
            np.all(np.isfinite(dx_a))
            and np.all(np.isfinite(dy_a))
            and np.all(np.isfinite(dz_a))
        ):
            break
        ap = min(1.0, _max_step(x, dx_a, n_cones))
        ad = min(1.0, _max_step(z, dz_a, n_cones))
        alpha_aff = min(ap, ad)
        gap_aff = float((x + alpha_aff * dx_a) @ (z + alpha_aff * dz_a))
        sigma = min(1.0, max(0.0, gap_aff / gap)) ** 3

        # Corrector with Mehrotra second-order term.
        e_vec = np.zeros(n)
        for k in range(n_cones):
            e_vec[4 * k] = 1.0
        e_vec[-1] = 1.0
        dc = (
            sigma * mu * e_vec
            - sc.lam_sq()
            - sc.jordan(sc.apply_winv(dx_a), sc.apply_w(dz_a))
        )
        dx, dy, dz = direction(dc)
        if not (
            np.all(np.isfinite(dx))
            and np.all(np.isfinite(dy))
            and np.all(np.isfinite(dz))
        ):
            break
        alpha_p = min(1.0, 0.99 * _max_step(x, dx, n_cones))
        alpha_d = min(1.0, 0.99 * _max_step(z, dz, n_cones))
        if max(alpha_p, alpha_d) < 1e-13:
            break
        x = x + alpha_p * dx
        y = y + alpha_d * dy
        z = z + alpha_d * dz
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(z))):
            x, z = best[1].copy(), best[3].copy()
            break

    accuracy, x, y, z, it = best
    t = x[-1] - 2.0
    return {
        "t": float(t),
        "u": x[:-1].copy(),
        "y": y,
        "z": z,
        "iterations": it + 1,
        "accuracy": float(accuracy),
    }


def _solve_verdict(rows, rhs, meta, templates, big_l, feas_tol):
    a_red, b_red, comb = _reduce_rows(rows, rhs)
    sol = socp_min_slack(a_red, b_red, big_l)
    if sol["accuracy"] > 1e-7:
        raise ArithmeticError(
            f"interior-point solve stalled at accuracy {sol['accuracy']:.2e}"
        )
    t = sol["t"]
    if t <= 0.1 * feas_tol:
        status = "feasible"
    elif t <= 10.0 * feas_tol:
        status = "boundary"
    else:
        status = "infeasible"

    ensemble = None
    certificate = None
    if status == "feasible":
        sigma = []
        for lam in range(big_l):
            coords = sol["u"][4 * lam : 4 * lam + 4].copy()
            coords[0] -= t
            sigma.append(linalg.op_from_coords(coords))
        ensemble = tuple(sigma)
    else:
        y_orig = comb.T @ (-sol["y"])
        witness = {}
        for r, tag in enumerate(meta):
            if tag is None:
                continue
            s, a, j = tag
            op = 0.5 * y_orig[r] * _template_op(templates[j])
            key = (s, a)
            witness[key] = witness.get(key, np.zeros((2, 2), complex)) + op
        constant = 0.5 * float(y_orig[len(meta) - 1])
        certificate = {
            "witness": witness,
            "constant": constant,
            "separating_value": float(t),
        }
    return FeasibilityVerdict(
        status=status,
        residual=float(t),
        ensemble=ensemble,
        certificate=certificate,
        iterations=sol["iterations"],
        solver_accuracy=sol["accuracy"],
    )


def _template_op(tmpl):
    return sum(tmpl[k] * PAULI[k] for k in range(4))


_FULL_TEMPLATES = [np.eye(4)[k] for k in range(4)]


def lhs_feasible(assemblage, feas_tol=FEAS_TOL):
    """Does the assemblage admit an (unrestricted) hidden-state model?"""
    ensembles = _ensembles_of(assemblage)
    strategies = strategy_table([len(e) for e in ensembles])
    rows, rhs, meta = _build_rows(ensembles, strategies, _FULL_TEMPLATES)
    return _solve_verdict(
        rows, rhs, meta, _FULL_TEMPLATES, strategies.n_strategies, feas_tol
    )


def restricted_lhs_feasible(assemblage, span, feas_tol=FEAS_TOL):
    """Hidden-state model required only on the span of Bob's effects."""
    ensembles = _ensembles_of(assemblage)
    strategies = strategy_table([len(e) for e in ensembles])
    templates = [span.coords[j] for j in range(span.dim)]
    rows, rhs, meta = _build_rows(ensembles, strategies, templates)
    return _solve_verdict(
        rows, rhs, meta, templates, strategies.n_strategies, feas_tol
    )


def verify_certificate(certificate, assemblage):
    """Independent check of a steering witness.

    Returns ``(min_cone_margin, target_value)``: the witness is valid when
    the margin is nonnegative (every deterministic strategy sees a PSD
    combination) and the target value is negative.
    """
    ensembles = _ensembles_of(assemblage)
    strategies = strategy_table([len(e) for e in ensembles])
    witness = certificate["witness"]
    kappa = certificate["constant"]
    min_margin = math.inf
    for lam in range(strategies.n_strategies):
        g = kappa * np.eye(2, dtype=complex)
        for (s, a), f_op in witness.items():
            if strategies.table[lam, s] == a:
                g = g + f_op
        w = linalg.eigvalsh(g)
        min_margin = min(min_margin, float(w[-1]))
    value = kappa
    for (s, a), f_op in witness.items():
        value += float(np.trace(f_op @ ensembles[s][a]).real)
    return min_margin, value
