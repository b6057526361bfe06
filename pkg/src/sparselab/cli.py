"""Command-line entry points.

Subcommands: ``construct`` writes an instance to disk, ``reproduce``
runs the full greedy-versus-l1 contrast and exits nonzero when any
verdict contradicts its expected value, ``certify`` runs a single
property certifier on a matrix file, and ``compare`` runs both solvers
on arbitrary user data without grading the outcome.

Exit codes: 0 success, 1 verdict contradiction (reproduce only),
2 bad input or usage, 3 enumeration budget refusal.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io as files
from . import properties, report
from .boosting import BoostingConfig
from .counterexample import construct
from .lasso import LassoPathConfig, lasso_path
from .linalg import nullspace


def _write_report_files(out_dir: str, rep: report.RecoveryReport) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    inst = construct(rep.c_target)
    written = list(files.write_instance(out_dir, inst).values())
    trajectory_path = os.path.join(out_dir, "boosting_trajectory.csv")
    files.write_csv(
        trajectory_path,
        report.TRAJECTORY_HEADER,
        report.trajectory_csv_rows(report.thin_rows(rep.rows)),
    )
    path_path = os.path.join(out_dir, "lasso_path.csv")
    files.write_csv(path_path, report.PATH_HEADER, report.path_csv_rows(rep.path_rows))
    summary_path = os.path.join(out_dir, "report.json")
    files.write_json(summary_path, report.report_summary(rep))
    return written + [trajectory_path, path_path, summary_path]


def cmd_construct(args) -> int:
    inst = construct(args.c)
    paths = files.write_instance(args.out, inst)
    print(
        f"constructed instance: n={inst.n} p={inst.p} s={inst.s} "
        f"gamma={inst.gamma:g} (target cone constant {inst.c_target:g})"
    )
    for label, path in paths.items():
        print(f"wrote {label}: {path}")
    return 0


def cmd_reproduce(args) -> int:
    rep = report.reproduce(
        c=args.c,
        nu=args.nu,
        iterations=args.iters,
        seed=args.seed,
        lambda_min_factor=args.lambda_min_factor,
        cone_window=args.window,
        enumeration_budget=args.budget,
    )
    print(
        f"instance: n={rep.n} p={rep.p} s={rep.s} gamma={rep.gamma:g}; "
        f"critical cone constant {rep.critical_c:g}, requested {rep.c_target:g}"
    )
    print(
        f"boosting: min dist_l1 {min(r.dist_l1 for r in rep.rows):.6g}, "
        f"cone exit at k={rep.cone_exit_k}, limit ratio {rep.limit_cone_ratio:.6g}"
    )
    print(
        f"lasso: terminal dist_l1 {rep.path_rows[-1].dist_l1:.6g} "
        f"at lambda_min {rep.lambda_min:.6g}"
    )
    for name, value in rep.verdicts.items():
        print(f"verdict {name}: {value} (expected {rep.expected[name]})")
    if args.out:
        for path in _write_report_files(args.out, rep):
            print(f"wrote {path}")
    failures = report.verdict_failures(rep)
    if failures:
        print("CONTRADICTIONS:", file=sys.stderr)
        for line in failures:
            print(f"  {line}", file=sys.stderr)
        return 1
    return 0


def _certificate(args) -> dict:
    X = files.read_matrix(args.matrix)
    name = args.property
    params: dict = {"matrix": args.matrix}
    if name in ("rn", "rn_uniform", "re"):
        if args.t is None:
            raise ValueError(f"property {name} requires --t")
    if name == "rn":
        ns = nullspace(X)
        spec = properties.ConeSpec(T=tuple(range(args.t)), c=args.c)
        verdict = properties.rn_check(X, spec, ns, seed=args.seed)
        params.update({"T": list(spec.T), "c": args.c})
        return {
            "property": "rn",
            "parameters": params,
            "holds": verdict.holds,
            "method": verdict.method,
            "critical_c": verdict.critical_c,
            "witness": verdict.witness,
        }
    if name == "rn_uniform":
        ns = nullspace(X)
        holds, worst_T, critical = properties.rn_uniform(
            X, args.t, args.c, ns, args.budget
        )
        params.update({"t": args.t, "c": args.c})
        return {
            "property": "rn_uniform",
            "parameters": params,
            "holds": holds,
            "worst_T": list(worst_T),
            "critical_c": critical,
        }
    if name == "re":
        ns = nullspace(X)
        spec = properties.ConeSpec(T=tuple(range(args.t)), c=args.c)
        estimate = properties.re_lower_bound(
            X, spec, samples=args.samples, seed=args.seed, ns=ns
        )
        params.update({"T": list(spec.T), "c": args.c, "samples": args.samples})
        return {
            "property": "re",
            "parameters": params,
            "phi_estimate": estimate.phi,
            "witness": estimate.witness,
        }
    if name == "rip":
        if args.t is None:
            raise ValueError("property rip requires --t")
        result = properties.rip_constant(X, args.t, args.budget)
        params.update({"t": args.t})
        return {
            "property": "rip",
            "parameters": params,
            "delta_t": result.delta_t,
            "extremal_subset": list(result.extremal_subset),
        }
    if name == "spark":
        cert = properties.spark(X, args.budget)
        return {
            "property": "spark",
            "parameters": params,
            "spark": cert.spark,
            "witness_columns": None
            if cert.witness_columns is None
            else list(cert.witness_columns),
            "lower_bound": cert.lower_bound,
            "subsets_tested": cert.subsets_tested,
            "budget_exhausted": cert.budget_exhausted,
        }
    if name == "unique_sparsest":
        if args.y is None or args.s is None:
            raise ValueError("property unique_sparsest requires --y and --s")
        Y = files.read_vector(args.y)
        fit = properties.unique_sparsest(X, Y, args.s, args.budget)
        params.update({"y": args.y, "s": args.s})
        return {
            "property": "unique_sparsest",
            "parameters": params,
            "unique": fit.unique,
            "support": list(fit.support),
            "size": fit.size,
            "fits_at_size": fit.fits_at_size,
            "supports_tested": fit.supports_tested,
        }
    raise ValueError(f"unknown property {name!r}")


def cmd_certify(args) -> int:
    certificate = _certificate(args)
    text = json.dumps(files.jsonable(certificate), sort_keys=True, indent=2)
    print(text)
    if args.out:
        files.write_json(args.out, certificate)
    return 0


def cmd_compare(args) -> int:
    X = files.read_matrix(args.matrix)
    Y = files.read_vector(args.y)
    if Y.size != X.shape[0]:
        raise ValueError(
            f"Y has length {Y.size} but the matrix has {X.shape[0]} rows"
        )
    config = BoostingConfig(nu=args.nu, max_iterations=args.iters, residual_stop=0.0)
    rows = report.boosting_trajectory(X, Y, config)
    points = lasso_path(X, Y, LassoPathConfig(lambda_min=args.lambda_min))
    path_rows = report.path_rows_from_points(points, None, ())
    os.makedirs(args.out, exist_ok=True)
    trajectory_path = os.path.join(args.out, "boosting_trajectory.csv")
    files.write_csv(
        trajectory_path,
        report.TRAJECTORY_HEADER,
        report.trajectory_csv_rows(report.thin_rows(rows)),
    )
    path_path = os.path.join(args.out, "lasso_path.csv")
    files.write_csv(path_path, report.PATH_HEADER, report.path_csv_rows(path_rows))
    print(f"boosting: {len(rows) - 1} iterations, final resid_l2 {rows[-1].resid_l2:.6g}")
    print(
        f"lasso: {len(path_rows)} path points, terminal l1 norm "
        f"{path_rows[-1].l1_norm:.6g}"
    )
    print(f"wrote {trajectory_path}")
    print(f"wrote {path_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparselab",
        description="Greedy boosting versus l1 minimization on sparse recovery instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_construct = sub.add_parser("construct", help="write an instance to disk")
    p_construct.add_argument("--c", type=float, required=True, help="target cone constant")
    p_construct.add_argument("--out", default=".", help="output directory")
    p_construct.set_defaults(func=cmd_construct)

    p_rep = sub.add_parser("reproduce", help="run the full contrast experiment")
    p_rep.add_argument("--c", type=float, required=True)
    p_rep.add_argument("--nu", type=float, default=1.0)
    p_rep.add_argument("--iters", type=int, default=2000)
    p_rep.add_argument("--seed", type=int, default=0)
    p_rep.add_argument("--out", default=None, help="directory for CSV/JSON artifacts")
    p_rep.add_argument(
        "--lambda-min-factor",
        type=float,
        default=report.LAMBDA_MIN_FACTOR,
        help="terminal path penalty as a fraction of lambda_max",
    )
    p_rep.add_argument("--window", type=int, default=report.CONE_WINDOW)
    p_rep.add_argument("--budget", type=int, default=properties.ENUMERATION_BUDGET)
    p_rep.set_defaults(func=cmd_reproduce)

    p_cert = sub.add_parser("certify", help="run one property certifier")
    p_cert.add_argument("--matrix", required=True)
    p_cert.add_argument(
        "--property",
        required=True,
        choices=["rn", "rn_uniform", "re", "rip", "spark", "unique_sparsest"],
    )
    p_cert.add_argument("--t", type=int, default=None)
    p_cert.add_argument("--c", type=float, default=1.0)
    p_cert.add_argument("--s", type=int, default=None)
    p_cert.add_argument("--y", default=None, help="response vector file")
    p_cert.add_argument("--samples", type=int, default=10_000)
    p_cert.add_argument("--seed", type=int, default=0)
    p_cert.add_argument("--budget", type=int, default=properties.ENUMERATION_BUDGET)
    p_cert.add_argument("--out", default=None, help="certificate JSON path")
    p_cert.set_defaults(func=cmd_certify)

    p_cmp = sub.add_parser("compare", help="run both solvers on user data")
    p_cmp.add_argument("--matrix", required=True)
    p_cmp.add_argument("--y", required=True)
    p_cmp.add_argument("--nu", type=float, default=1.0)
    p_cmp.add_argument("--lambda-min", type=float, required=True)
    p_cmp.add_argument("--iters", type=int, default=1000)
    p_cmp.add_argument("--out", default=".", help="output directory")
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except properties.BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
