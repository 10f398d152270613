"""Render the three region figures from scan CSVs.

Analytic boundary curves are drawn from the closed forms below; the shaded
regions come from the scan verdict columns, so each figure visually
cross-validates the data against the theory.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from steerkit_figs.tables import SchemaError

RT2 = math.sqrt(2.0)
#: Coexistence threshold of the hierarchy family, (sqrt5 - 1)/2.
S_STEERABLE = (math.sqrt(5.0) - 1.0) / 2.0
#: CHSH-type violability threshold of the hierarchy family.
S_BELL = 1.0 / RT2
#: Steerability threshold of the one-way families.
P_STEERABLE = 1.0 / RT2


def s_upper_bound(c):
    """Upper envelope 2 sqrt(1 + C^2) of the steering measure."""
    return 2.0 * np.sqrt(1.0 + np.asarray(c) ** 2)


def s_lower_bound(c):
    """Lower envelope 2 sqrt2 C."""
    return 2.0 * RT2 * np.asarray(c)


def s_mub_upper_bound(c):
    """Upper envelope sqrt2 (1 + C) under mutually unbiased axes."""
    return RT2 * (1.0 + np.asarray(c))


def bell_violable_p(theta):
    """One-way family: smallest p that allows a CHSH-type violation."""
    return 1.0 / np.sqrt(1.0 + np.sin(2.0 * np.asarray(theta)) ** 2)


def one_way_condition_residual(p, theta):
    """Positive where the Bob-to-Alice unsteerability condition holds."""
    p = np.asarray(p, dtype=float)
    return np.cos(2.0 * np.asarray(theta)) ** 2 * (2.0 - p) * p**3 - (
        2.0 * p - 1.0
    )


def _fig1(table):
    table.validate_for(1)
    c = table.floats("C")
    s = table.floats("S")
    sm = table.floats("S_M")
    grid = np.linspace(0.0, 1.0, 400)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0), sharey=True)
    for ax, values, upper, label in (
        (ax1, s, s_upper_bound(grid), "S"),
        (ax2, sm, s_mub_upper_bound(grid), "S_M"),
    ):
        ax.fill_between(
            grid, s_lower_bound(grid), upper, color="#ffd9a0", alpha=0.6,
            label="allowed band",
        )
        ax.plot(grid, s_lower_bound(grid), "k-", lw=1.2)
        ax.plot(grid, upper, "k--", lw=1.2)
        ax.scatter(c, values, s=3.0, c="#1f4e9c", alpha=0.5, linewidths=0)
        ax.axhline(2.0, color="0.4", lw=0.8)
        ax.set_xlabel("concurrence C")
        ax.set_ylabel(label)
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 2 * RT2 + 0.05)
    ax1.set_title("maximal value vs concurrence")
    ax2.set_title("mutually unbiased axes")
    layers = {
        "scatter_c": c,
        "scatter_s": s,
        "scatter_sm": sm,
        "envelope_lower": s_lower_bound(grid),
        "envelope_upper": s_upper_bound(grid),
    }
    return fig, layers


def _region_edge(xs, flags):
    """First grid value where a sorted-boolean column flips to True."""
    order = np.argsort(xs)
    xs = xs[order]
    flags = flags[order]
    idx = np.argmax(flags)
    if not flags[idx]:
        return None
    return xs[idx]


def _fig2(table):
    table.validate_for(2)
    s = table.floats("s")
    svals = table.floats("S")
    steer = table.flags("steerable")
    viol = table.flags("bell_violable")
    fig, ax = plt.subplots(figsize=(5.4, 4.0))
    ax.plot(s, svals, color="#1f4e9c", lw=1.6, label="S = 2√2 s")
    band = steer & ~viol
    ax.fill_between(
        s, 0, 2 * RT2, where=band, color="#9fc5ff", alpha=0.5,
        label="steerable, no violation",
    )
    ax.fill_between(
        s, 0, 2 * RT2, where=viol, color="0.25", alpha=0.45,
        label="CHSH-type violation",
    )
    ax.axvline(S_STEERABLE, color="k", ls="--", lw=1.0)
    ax.axvline(S_BELL, color="k", ls="-.", lw=1.0)
    ax.axhline(2.0, color="0.4", lw=0.8)
    ax.set_xlabel("mixing parameter s (= concurrence)")
    ax.set_ylabel("S")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 2 * RT2 + 0.05)
    ax.legend(loc="upper left", fontsize=8)
    layers = {
        "s": s,
        "S": svals,
        "steer_edge": _region_edge(s, steer),
        "viol_edge": _region_edge(s, viol),
        "analytic_edges": np.array([S_STEERABLE, S_BELL]),
    }
    return fig, layers


def _fig3(table):
    table.validate_for(3)
    p = table.floats("p")
    theta = table.floats("theta")
    steer = table.flags("steerable_ab")
    viol = table.flags("bell_violable")
    unst = table.flags("bob_to_alice_unsteerable")
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    colors = np.full(len(p), "#f2f2f2", dtype=object)
    colors[unst] = "#ffe76e"
    colors[steer & ~viol] = "#c23b22"
    colors[steer & ~viol & unst] = "#7a1f14"
    colors[viol] = "#f59b42"
    ax.scatter(p, theta, c=list(colors), s=12.0, marker="s", linewidths=0)
    th_grid = np.linspace(max(1e-4, theta.min()), theta.max(), 400)
    ax.plot(bell_violable_p(th_grid), th_grid, "k-", lw=1.2,
            label="violability edge")
    ax.axvline(P_STEERABLE, color="k", ls="--", lw=1.0, label="p = 1/√2")
    pg, tg = np.meshgrid(np.linspace(p.min(), p.max(), 300), th_grid)
    ax.contour(
        pg, tg, one_way_condition_residual(pg, tg), levels=[0.0],
        colors="k", linestyles=":", linewidths=1.2,
    )
    ax.plot([0.8], [0.05], "ko", ms=5)
    ax.set_xlabel("p")
    ax.set_ylabel("theta")
    ax.set_xlim(p.min(), p.max())
    ax.set_ylim(theta.min(), theta.max())
    ax.legend(loc="upper left", fontsize=8)
    steer_edges = {}
    viol_edges = {}
    unst_edges = {}
    for th in np.unique(theta):
        sel = theta == th
        steer_edges[float(th)] = _region_edge(p[sel], steer[sel])
        viol_edges[float(th)] = _region_edge(p[sel], viol[sel])
        unst_edges[float(th)] = _region_edge(p[sel], ~unst[sel])
    layers = {
        "steer_edges": steer_edges,
        "viol_edges": viol_edges,
        "unsteerable_end_edges": unst_edges,
    }
    return fig, layers


def render_fig(table, figure, out_path):
    """Render figure 1, 2 or 3 from a matching scan table.

    Returns the plotted data layers so callers can assert on them; the
    image itself is a pure function of the CSV contents.
    """
    if figure == 1:
        fig, layers = _fig1(table)
    elif figure == 2:
        fig, layers = _fig2(table)
    elif figure == 3:
        fig, layers = _fig3(table)
    else:
        raise SchemaError(f"unknown figure id {figure!r}")
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return layers
