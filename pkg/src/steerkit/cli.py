"""Command-line front end.

Subcommands
-----------
analyze     single-state report (entanglement, CHSH-type values, coexistence,
            hidden-state feasibility) as JSON
scan        parameter scans over the named families, one CSV row per grid
            point (these drive the figure scripts)
crosscheck  random-instance agreement audit between the analytic coexistence
            route and the restricted hidden-state feasibility solver
sample      finite-shot statistics for a state and axes, as CSV

Exit codes: 0 success, 2 validation failure, 3 cross-check disagreement.

CSV schemas (header rows, floats at 12 significant digits):

hierarchy scan:
    s,C,N,S,S_M,analog_value,chsh_value,coex_lhs,coex_rhs,coex_margin,steerable,bell_violable[,sdp_status]
one_way / one_way_povm scan:
    p,theta,C,N,S,S_M,analog_value,coex_margin,steerable_ab,bell_violable,bob_to_alice_unsteerable[,sdp_status]
bell_diagonal scan:
    index,t1,t2,t3,C,N,S,S_M,lambda_sum,entangled,steerable_optimal,bell_violable,bd_lower_ok[,sdp_status]
random scan:
    index,kind,C,N,S,S_M,lower_ok,upper_ok,lower_mub_ok,upper_mub_ok
sample:
    setting_a,setting_b,shots,n_pp,n_pm,n_mp,n_mm,e_a,e_b,e_ab,empirical

Relative ``--out`` paths resolve under ``$STEERKIT_OUT_DIR`` when that
variable is set.
"""

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from steerkit import (
    assemblages,
    criteria,
    linalg,
    measurements,
    sdp,
    statistics,
    states,
)
from steerkit.errors import SteerkitError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DISAGREEMENT = 3

FAMILIES = ("hierarchy", "one_way", "one_way_povm", "bell_diagonal", "random")


def _fmt(x):
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _resolve_out(path):
    base = os.environ.get("STEERKIT_OUT_DIR", "")
    if base and path and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, path)
    return path


def parse_axis(token):
    token = token.strip().lower()
    if token in measurements.NAMED_AXES:
        return measurements.NAMED_AXES[token].copy()
    parts = [float(v) for v in token.split(",")]
    if len(parts) != 3:
        raise SteerkitError(f"axis {token!r} needs three components")
    return measurements.unit_axis(parts)


def parse_axes(spec):
    """Four semicolon-separated axes: a1;a2;b1;b2 (named or comma triples)."""
    tokens = [t for t in spec.split(";") if t.strip()]
    if len(tokens) != 4:
        raise SteerkitError("--axes needs exactly four axes a1;a2;b1;b2")
    vecs = [parse_axis(t) for t in tokens]
    return vecs[0], vecs[1], vecs[2], vecs[3]


def parse_params(spec):
    out = {}
    for item in (spec or "").split(","):
        item = item.strip()
        if not item:
            continue
        key, _, val = item.partition("=")
        if not _:
            raise SteerkitError(f"parameter {item!r} is not of the form k=v")
        out[key.strip()] = float(val)
    return out


def state_from_args(args):
    if getattr(args, "state", None):
        with open(args.state, encoding="utf-8") as fh:
            return states.TwoQubitState.from_json(fh.read())
    family = getattr(args, "family", None)
    params = parse_params(getattr(args, "params", "") or "")
    if family == "hierarchy":
        return states.hierarchy_state(params["s"])
    if family == "one_way":
        return states.one_way_state(params["p"], params["theta"])
    if family == "one_way_povm":
        return states.one_way_povm_state(params["p"], params["theta"])
    if family == "bell_diagonal":
        return states.bell_diagonal_state(
            (params["t1"], params["t2"], params["t3"])
        )
    if family == "random":
        return states.random_state(int(params.get("seed", 0)), "mixed")
    raise SteerkitError("provide --state FILE or --family with --params")


def resolve_axes(state, policy, axes_spec):
    """Measurement axes per policy: fixed (given/default x,z), optimal, mub."""
    if policy == "fixed":
        if axes_spec:
            return parse_axes(axes_spec)
        xa = measurements.NAMED_AXES["x"]
        za = measurements.NAMED_AXES["z"]
        return xa.copy(), za.copy(), xa.copy(), za.copy()
    a1, a2, b1, b2 = criteria.optimal_measurements(state.T)
    if policy == "optimal":
        return a1, a2, b1, b2
    if policy == "mub":
        # Alice axes rotated 45 degrees within the top singular plane attain
        # the mutually-unbiased CHSH maximum.
        c1 = (a1 + a2) / math.sqrt(2.0)
        c2 = (a1 - a2) / math.sqrt(2.0)
        return c1, c2, b1, b2
    raise SteerkitError(f"unknown policy {policy!r}")


def steering_analysis(state, a_axes, b_axes, include_sdp=True):
    """Coexistence verdict plus (optionally) both feasibility verdicts."""
    asm = assemblages.conditional_states(state, a_axes)
    span = measurements.span_of(
        [measurements.ProjectiveMeasurement(tuple(b)) for b in b_axes]
    )
    ra = assemblages.restrict(asm, span)
    seo = assemblages.steering_equivalent_observables(ra)
    out = {"span_dim": span.dim}
    if isinstance(seo, assemblages.UnsteerableByPurity):
        out.update(
            {
                "pure_reduced_state": True,
                "steerable": False,
                "coexistence": None,
            }
        )
    else:
        rep = criteria.coexistence(seo.plus(0), seo.plus(1))
        out.update(
            {
                "pure_reduced_state": False,
                "steerable": bool(not rep.coexistent),
                "coexistence": {
                    "lhs": rep.lhs,
                    "rhs": rep.rhs,
                    "F1": rep.F1,
                    "F2": rep.F2,
                    "violation": rep.violation,
                    "coexistent": rep.coexistent,
                    "boundary": rep.boundary,
                    "sharp_branch": rep.sharp_branch,
                },
            }
        )
    if include_sdp:
        full = sdp.lhs_feasible(asm)
        restr = sdp.restricted_lhs_feasible(asm, span)
        out["sdp_full"] = {"status": full.status, "residual": full.residual}
        out["sdp_restricted"] = {
            "status": restr.status,
            "residual": restr.residual,
        }
    return out


def analyze_report(state, policy="fixed", axes_spec=None, include_sdp=True):
    a1, a2, b1, b2 = resolve_axes(state, policy, axes_spec)
    rec = statistics.exact_statistics(state, [a1, a2], [b1, b2])
    corr = rec.correlator_matrix()
    ent = states.entanglement(state)
    report = {
        "state": json.loads(state.to_json()),
        "axes": {
            "a1": list(a1),
            "a2": list(a2),
            "b1": list(b1),
            "b2": list(b2),
            "policy": policy,
        },
        "concurrence": ent.concurrence,
        "negativity": ent.negativity,
        "pt_eigenvalues": list(ent.pt_eigenvalues),
        "S": criteria.chsh_max(state.T),
        "S_M": criteria.chsh_max_mub(state.T),
        "bell_violable": bool(criteria.chsh_max(state.T) > 2.0 + 1e-9),
        "correlators": corr.tolist(),
        "chsh_value": criteria.chsh_value(corr).value,
        "analog_chsh_value": criteria.analog_chsh_value(corr, b1, b2).value,
    }
    report.update(steering_analysis(state, [a1, a2], [b1, b2], include_sdp))
    return report


# --- scan ---


def parse_grid(spec):
    """Grid axes like ``s=0:1:101`` or ``p=0.5:1:80,theta=0:0.3:60``."""
    axes = {}
    for item in (spec or "").split(","):
        item = item.strip()
        if not item:
            continue
        key, _, rng = item.partition("=")
        try:
            lo, hi, num = rng.split(":")
            axes[key.strip()] = np.linspace(float(lo), float(hi), int(num))
        except ValueError as exc:
            raise SteerkitError(
                f"grid axis {item!r} is not of the form name=lo:hi:npoints"
            ) from exc
    return axes


def _hierarchy_row(args_tuple):
    s, policy, axes_spec, include_sdp = args_tuple
    st = states.hierarchy_state(s)
    ent = states.entanglement(st)
    a1, a2, b1, b2 = resolve_axes(st, policy, axes_spec)
    rec = statistics.exact_statistics(st, [a1, a2], [b1, b2])
    corr = rec.correlator_matrix()
    ana = steering_analysis(st, [a1, a2], [b1, b2], include_sdp)
    coex = ana["coexistence"] or {"lhs": 0.0, "rhs": 0.0, "violation": 0.0}
    s_val = criteria.chsh_max(st.T)
    row = {
        "s": s,
        "C": ent.concurrence,
        "N": ent.negativity,
        "S": s_val,
        "S_M": criteria.chsh_max_mub(st.T),
        "analog_value": criteria.analog_chsh_value(corr, b1, b2).value,
        "chsh_value": criteria.chsh_value(corr).value,
        "coex_lhs": coex["lhs"],
        "coex_rhs": coex["rhs"],
        "coex_margin": coex["violation"],
        "steerable": ana["steerable"],
        "bell_violable": s_val > 2.0 + 1e-9,
    }
    if include_sdp:
        row["sdp_status"] = ana["sdp_restricted"]["status"]
    return row


def _one_way_row(args_tuple):
    p, theta, family, policy, axes_spec, include_sdp = args_tuple
    maker = (
        states.one_way_state if family == "one_way" else states.one_way_povm_state
    )
    st = maker(p, theta)
    ent = states.entanglement(st)
    a1, a2, b1, b2 = resolve_axes(st, policy, axes_spec)
    rec = statistics.exact_statistics(st, [a1, a2], [b1, b2])
    corr = rec.correlator_matrix()
    ana = steering_analysis(st, [a1, a2], [b1, b2], include_sdp)
    coex = ana["coexistence"] or {"violation": 0.0}
    s_val = criteria.chsh_max(st.T)
    row = {
        "p": p,
        "theta": theta,
        "C": ent.concurrence,
        "N": ent.negativity,
        "S": s_val,
        "S_M": criteria.chsh_max_mub(st.T),
        "analog_value": criteria.analog_chsh_value(corr, b1, b2).value,
        "coex_margin": coex["violation"],
        "steerable_ab": ana["steerable"],
        "bell_violable": s_val > 2.0 + 1e-9,
        "bob_to_alice_unsteerable": criteria.one_way_unsteerable_condition(
            p, theta
        ),
    }
    if include_sdp:
        row["sdp_status"] = ana["sdp_restricted"]["status"]
    return row


def _bell_diagonal_row(args_tuple):
    index, seed, include_sdp = args_tuple
    st = states.random_state(seed, "bell_diagonal")
    ent = states.entanglement(st)
    sv, _, _ = linalg.svd3(st.T)
    lam_sum = float(sv[0] ** 2 + sv[1] ** 2)
    rec = criteria.concurrence_bounds_check(st)
    try:
        a1, a2, b1, b2 = criteria.optimal_measurements(st.T)
        ana = steering_analysis(st, [a1, a2], [b1, b2], include_sdp)
        steerable = ana["steerable"]
        sdp_status = ana.get("sdp_restricted", {}).get("status", "")
    except SteerkitError:
        steerable = False
        sdp_status = ""
    row = {
        "index": index,
        "t1": float(st.T[0, 0]),
        "t2": float(st.T[1, 1]),
        "t3": float(st.T[2, 2]),
        "C": ent.concurrence,
        "N": ent.negativity,
        "S": rec.s_value,
        "S_M": rec.s_mub,
        "lambda_sum": lam_sum,
        "entangled": ent.concurrence > 1e-9,
        "steerable_optimal": steerable,
        "bell_violable": rec.s_value > 2.0 + 1e-9,
        "bd_lower_ok": rec.bd_lower_ok,
    }
    if include_sdp:
        row["sdp_status"] = sdp_status
    return row


def _random_row(args_tuple):
    index, seed, kind = args_tuple
    st = states.random_state(seed, kind)
    rec = criteria.concurrence_bounds_check(st)
    return {
        "index": index,
        "kind": kind,
        "C": rec.concurrence,
        "N": states.entanglement(st).negativity,
        "S": rec.s_value,
        "S_M": rec.s_mub,
        "lower_ok": rec.lower_ok,
        "upper_ok": rec.upper_ok,
        "lower_mub_ok": rec.lower_mub_ok,
        "upper_mub_ok": rec.upper_mub_ok,
    }


def _map_rows(worker, tasks, jobs):
    if jobs <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks, chunksize=64))


def run_scan(args):
    grid = parse_grid(args.grid)
    include_sdp = args.sdp
    if args.family == "hierarchy":
        svals = grid.get("s")
        if svals is None:
            raise SteerkitError("hierarchy scan needs --grid s=lo:hi:n")
        tasks = [(float(s), args.policy, args.axes, include_sdp) for s in svals]
        rows = _map_rows(_hierarchy_row, tasks, args.jobs)
    elif args.family in ("one_way", "one_way_povm"):
        pvals = grid.get("p")
        tvals = grid.get("theta")
        if pvals is None or tvals is None:
            raise SteerkitError(
                "one-way scans need --grid p=lo:hi:n,theta=lo:hi:m"
            )
        tasks = [
            (float(p), float(th), args.family, args.policy, args.axes, include_sdp)
            for p in pvals
            for th in tvals
        ]
        rows = _map_rows(_one_way_row, tasks, args.jobs)
    elif args.family == "bell_diagonal":
        tasks = [(i, args.seed + i, include_sdp) for i in range(args.n)]
        rows = _map_rows(_bell_diagonal_row, tasks, args.jobs)
    elif args.family == "random":
        kinds = ("mixed", "pure")
        tasks = [
            (i, args.seed + i, kinds[i % len(kinds)]) for i in range(args.n)
        ]
        rows = _map_rows(_random_row, tasks, args.jobs)
    else:
        raise SteerkitError(f"unknown family {args.family!r}")
    out = _resolve_out(args.out)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = list(rows[0].keys())
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row[k]) for k in header])
    print(f"wrote {len(rows)} rows to {out}")
    return EXIT_OK


# --- crosscheck ---


def _random_unit(rng):
    v = rng.normal(size=3)
    n = math.sqrt(float(v @ v))
    while n < 1e-12:
        v = rng.normal(size=3)
        n = math.sqrt(float(v @ v))
    return v / n


def run_crosscheck(n_instances, seed, margin_band=1e-6):
    """Analytic coexistence verdict vs restricted feasibility, head to head.

    Instances whose analytic margin falls inside ``margin_band``, or whose
    solver verdict lands on the tolerance boundary, are reported separately
    rather than counted as (dis)agreements.
    """
    if n_instances < 1:
        raise SteerkitError("crosscheck needs at least one instance")
    rng = np.random.default_rng(seed)
    agree = disagree = boundary = purity = 0
    disagreements = []
    kinds = ("mixed", "mixed", "pure", "bell_diagonal")
    for i in range(n_instances):
        st = states.random_state(int(rng.integers(2**63)), kinds[i % 4])
        a_axes = [_random_unit(rng), _random_unit(rng)]
        b1, b2 = _random_unit(rng), _random_unit(rng)
        while float(np.cross(b1, b2) @ np.cross(b1, b2)) < 1e-6:
            b2 = _random_unit(rng)
        span = measurements.span_of(
            [
                measurements.ProjectiveMeasurement(tuple(b1)),
                measurements.ProjectiveMeasurement(tuple(b2)),
            ]
        )
        asm = assemblages.conditional_states(st, a_axes)
        ra = assemblages.restrict(asm, span)
        seo = assemblages.steering_equivalent_observables(ra)
        verdict = sdp.restricted_lhs_feasible(asm, span)
        if isinstance(seo, assemblages.UnsteerableByPurity):
            purity += 1
            if verdict.status == "feasible":
                agree += 1
            else:
                disagree += 1
                disagreements.append(i)
            continue
        rep = criteria.coexistence(seo.plus(0), seo.plus(1))
        if abs(rep.violation) < margin_band or verdict.status == "boundary":
            boundary += 1
            continue
        analytic_unsteerable = rep.coexistent
        if analytic_unsteerable == (verdict.status == "feasible"):
            agree += 1
        else:
            disagree += 1
            disagreements.append(i)
    return {
        "instances": n_instances,
        "agreements": agree,
        "disagreements": disagree,
        "boundary_skipped": boundary,
        "purity_cases": purity,
        "disagreement_indices": disagreements,
        "seed": seed,
    }


# --- entry point ---


def build_parser():
    parser = argparse.ArgumentParser(
        prog="steerkit",
        description="steering and Bell-nonlocality analysis for two-qubit states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_state_args(p):
        p.add_argument("--family", choices=FAMILIES)
        p.add_argument("--params", help="family parameters, e.g. s=0.65 or p=0.8,theta=0.05")
        p.add_argument("--state", help="path to a state JSON file")

    p_an = sub.add_parser("analyze", help="single-state JSON report")
    add_state_args(p_an)
    p_an.add_argument("--axes", help="a1;a2;b1;b2 (named x/y/z or comma triples)")
    p_an.add_argument(
        "--policy", choices=("fixed", "optimal", "mub"), default="fixed"
    )
    p_an.add_argument("--no-sdp", dest="sdp", action="store_false")
    p_an.add_argument("--out", help="write report JSON here instead of stdout")

    p_sc = sub.add_parser("scan", help="family parameter scan to CSV")
    p_sc.add_argument("--family", choices=FAMILIES, required=True)
    p_sc.add_argument("--grid", help="e.g. s=0:1:1001 or p=0.5:1:80,theta=0:0.3:60")
    p_sc.add_argument("--n", type=int, default=1000, help="sample count for random families")
    p_sc.add_argument("--seed", type=int, default=0)
    p_sc.add_argument("--axes")
    p_sc.add_argument(
        "--policy", choices=("fixed", "optimal", "mub"), default="fixed"
    )
    p_sc.add_argument("--sdp", action="store_true", help="add the solver verdict column")
    p_sc.add_argument("--jobs", type=int, default=1)
    p_sc.add_argument("--out", required=True)

    p_cc = sub.add_parser("crosscheck", help="analytic-vs-solver agreement audit")
    p_cc.add_argument("--n", type=int, required=True)
    p_cc.add_argument("--seed", type=int, default=0)
    p_cc.add_argument("--out")

    p_sm = sub.add_parser("sample", help="finite-shot statistics to CSV")
    add_state_args(p_sm)
    p_sm.add_argument("--axes")
    p_sm.add_argument(
        "--policy", choices=("fixed", "optimal", "mub"), default="fixed"
    )
    p_sm.add_argument("--shots", type=int, required=True)
    p_sm.add_argument("--seed", type=int, default=0)
    p_sm.add_argument("--out", required=True)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            state = state_from_args(args)
            report = analyze_report(
                state, policy=args.policy, axes_spec=args.axes, include_sdp=args.sdp
            )
            text = json.dumps(report, sort_keys=True, indent=2)
            if args.out:
                with open(_resolve_out(args.out), "w", encoding="utf-8") as fh:
                    fh.write(text + "\n")
            else:
                print(text)
            return EXIT_OK
        if args.command == "scan":
            return run_scan(args)
        if args.command == "crosscheck":
            summary = run_crosscheck(args.n, args.seed)
            text = json.dumps(summary, sort_keys=True, indent=2)
            if args.out:
                with open(_resolve_out(args.out), "w", encoding="utf-8") as fh:
                    fh.write(text + "\n")
            print(text)
            if summary["disagreements"]:
                return EXIT_DISAGREEMENT
            return EXIT_OK
        if args.command == "sample":
            state = state_from_args(args)
            a1, a2, b1, b2 = resolve_axes(state, args.policy, args.axes)
            record = statistics.sample_statistics(
                state, [a1, a2], [b1, b2], args.shots, args.seed
            )
            out = _resolve_out(args.out)
            with open(out, "w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=statistics.CSV_FIELDS)
                writer.writeheader()
                for row in statistics.csv_rows(record):
                    writer.writerow({k: _fmt(v) for k, v in row.items()})
            analog = criteria.analog_chsh_value(
                record.correlator_matrix(), b1, b2
            )
            print(
                json.dumps(
                    {
                        "analog_chsh_value": analog.value,
                        "violated": analog.violated,
                        "out": out,
                    },
                    sort_keys=True,
                )
            )
            return EXIT_OK
        raise SteerkitError(f"unknown command {args.command!r}")
    except (SteerkitError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
