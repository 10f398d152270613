"""Measurement statistics: exact expectation values and finite-shot sampling.

Every quantity the criteria consume is a function of the single-party
expectations <A_m> = alpha.a_m, <B_n> = beta.b_n and the full correlators
<A_m B_n> = a_m^T T b_n, so both exact and sampled records feed straight
into the CHSH-type evaluators.
"""

from dataclasses import dataclass

import numpy as np

from steerkit.measurements import unit_axis


@dataclass(frozen=True)
class CorrelationRecord:
    """Expectations for two settings per side, exact or sampled.

    ``ab_exp[m][n]`` is <A_m B_n>; ``counts[(m, n)]`` holds the four joint
    outcome counts (pp, pm, mp, mm) when the record is empirical.
    """

    a_exp: tuple
    b_exp: tuple
    ab_exp: tuple
    shots_per_setting: int
    empirical: bool
    counts: dict | None = None

    def correlator_matrix(self):
        return np.array(self.ab_exp, dtype=float)


def exact_statistics(state, a_axes, b_axes):
    """Born-rule expectation values for projective axes on both sides."""
    a_axes = [unit_axis(a) for a in a_axes]
    b_axes = [unit_axis(b) for b in b_axes]
    a_exp = tuple(float(state.alpha @ a) for a in a_axes)
    b_exp = tuple(float(state.beta @ b) for b in b_axes)
    ab = tuple(
        tuple(float(a @ state.T @ b) for b in b_axes) for a in a_axes
    )
    return CorrelationRecord(
        a_exp=a_exp,
        b_exp=b_exp,
        ab_exp=ab,
        shots_per_setting=0,
        empirical=False,
    )


def _joint_probabilities(ea, eb, eab):
    probs = np.empty(4)
    for i, (sa, sb) in enumerate(((1, 1), (1, -1), (-1, 1), (-1, -1))):
        probs[i] = 0.25 * (1.0 + sa * ea + sb * eb + sa * sb * eab)
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def sample_statistics(state, a_axes, b_axes, shots_per_setting, seed):
    """Finite-shot estimate of the full statistics.

    Each joint setting (A_m, B_n) is sampled independently from its
    four-outcome distribution, with per-setting generators derived from the
    seed so results do not depend on evaluation order.  Single-party
    expectations pool the marginal counts of the settings involving that
    measurement.
    """
    if shots_per_setting < 1:
        raise ValueError("need at least one shot per setting")
    exact = exact_statistics(state, a_axes, b_axes)
    seeds = np.random.SeedSequence(seed).spawn(4)
    counts = {}
    for idx, (m, n) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        rng = np.random.default_rng(seeds[idx])
        probs = _joint_probabilities(
            exact.a_exp[m], exact.b_exp[n], exact.ab_exp[m][n]
        )
        counts[(m, n)] = tuple(
            int(c) for c in rng.multinomial(shots_per_setting, probs)
        )
    shots = float(shots_per_setting)
    ab = tuple(
        tuple(
            (counts[(m, n)][0] - counts[(m, n)][1] - counts[(m, n)][2] + counts[(m, n)][3])
            / shots
            for n in range(2)
        )
        for m in range(2)
    )
    a_exp = []
    for m in range(2):
        plus = sum(counts[(m, n)][0] + counts[(m, n)][1] for n in range(2))
        minus = sum(counts[(m, n)][2] + counts[(m, n)][3] for n in range(2))
        a_exp.append((plus - minus) / (2.0 * shots))
    b_exp = []
    for n in range(2):
        plus = sum(counts[(m, n)][0] + counts[(m, n)][2] for m in range(2))
        minus = sum(counts[(m, n)][1] + counts[(m, n)][3] for m in range(2))
        b_exp.append((plus - minus) / (2.0 * shots))
    return CorrelationRecord(
        a_exp=tuple(a_exp),
        b_exp=tuple(b_exp),
        ab_exp=ab,
        shots_per_setting=shots_per_setting,
        empirical=True,
        counts=counts,
    )


#: Column order of the per-setting CSV rows emitted by the CLI.
CSV_FIELDS = (
    "setting_a",
    "setting_b",
    "shots",
    "n_pp",
    "n_pm",
    "n_mp",
    "n_mm",
    "e_a",
    "e_b",
    "e_ab",
    "empirical",
)


def csv_rows(record):
    """One row per joint setting, following ``CSV_FIELDS``."""
    rows = []
    for m in range(2):
        for n in range(2):
            cnt = record.counts[(m, n)] if record.counts else ("", "", "", "")
            rows.append(
                {
                    "setting_a": m + 1,
                    "setting_b": n + 1,
                    "shots": record.shots_per_setting,
                    "n_pp": cnt[0],
                    "n_pm": cnt[1],
                    "n_mp": cnt[2],
                    "n_mm": cnt[3],
                    "e_a": record.a_exp[m],
                    "e_b": record.b_exp[n],
                    "e_ab": record.ab_exp[m][n],
                    "empirical": int(record.empirical),
                }
            )
    return rows
