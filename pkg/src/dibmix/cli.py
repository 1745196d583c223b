"""Command-line interface: reproducible clustering, baseline, generation,
benchmark, sweep, and scoring runs.

Every run writes a ``manifest.json`` capturing the resolved parameters, the
seed, and library versions — enough to reproduce the outputs bit-for-bit.
Worker counts are deliberately excluded: results are identical for any
``--threads`` value.  Errors surface as one-line JSON objects on stderr with
exit code 2 for usage/input problems and 1 for internal failures.
"""

import argparse
import csv
import json
import os
import platform
import sys

import numpy as np
import scipy

from . import __version__
from .bandwidth import (
    DEFAULT_S_MULTIPLIER,
    BalanceSpec,
    default_s,
    select_lambda,
)
from .baselines import (
    KPROTO_DEFAULT_RESTARTS,
    PAM_DEFAULT_RESTARTS,
    default_gamma,
    gower,
    kprototypes_fit,
    pam_fit,
)
from .benchmark import (
    BenchmarkPlan,
    METHOD_NAMES,
    read_results_csv,
    run_benchmark,
    write_aggregates_csv,
    write_results_csv,
)
from .datagen import BALANCE_EQUAL, BALANCE_IMBALANCED, GenSpec, generate
from .dataset import (
    MixedDataset,
    load_labels,
    read_csv,
    read_schema_file,
    standardize,
    write_csv,
)
from .dib import DEFAULT_MAX_ITER, DEFAULT_RESTARTS, beta_sweep, dib_fit_density
from .errors import (
    DegenerateSmoothingError,
    DibmixError,
    ParseError,
    SchemaError,
    SizeCapError,
    ZeroVarianceError,
)
from .kernels import Bandwidths, DEFAULT_MAX_N, estimate_conditional
from .metrics import ari
from .seeding import STREAM_SUBSAMPLE, derive_seed

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2

_ERROR_CODES = (
    (FileNotFoundError, "input_not_found"),
    (ParseError, "parse_error"),
    (SchemaError, "schema_error"),
    (ZeroVarianceError, "zero_variance"),
    (SizeCapError, "size_cap"),
    (DegenerateSmoothingError, "degenerate_smoothing"),
    (DibmixError, "invalid_input"),
    (ValueError, "invalid_argument"),
)


def _emit_error(code: str, message: str) -> None:
    print(json.dumps({"error": {"code": code, "message": message}}), file=sys.stderr)


def _resolve_threads(value) -> int:
    if value is not None:
        threads = value
    else:
        threads = int(os.environ.get("DIBMIX_THREADS", "1"))
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def _ensure_outdir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_manifest(outdir, command, parameters) -> None:
    manifest = {
        "command": command,
        "parameters": parameters,
        "versions": {
            "dibmix": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }
    _write_json(os.path.join(outdir, "manifest.json"), manifest)


def _write_assignment(path, labels) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["assignment"])
        for label in labels:
            writer.writerow([int(label)])


def _load_dataset(args) -> MixedDataset:
    categorical = []
    if args.schema_file:
        categorical.extend(read_schema_file(args.schema_file))
    for entry in args.categorical or ():
        categorical.extend(name.strip() for name in entry.split(",") if name.strip())
    return read_csv(args.input, categorical=categorical)


def _maybe_subsample(ds, args):
    """Optional seeded uniform row subsample; returns (dataset, indices)."""
    if args.subsample is None or args.subsample >= ds.n:
        return ds, None
    if args.subsample < 2:
        raise ValueError("subsample size must be at least 2")
    rng = np.random.default_rng(derive_seed(args.seed, STREAM_SUBSAMPLE))
    idx = np.sort(rng.choice(ds.n, size=args.subsample, replace=False))
    return ds.subsample(idx), idx


def _resolve_bandwidths(ds, args) -> Bandwidths:
    """CLI overrides take precedence over the balancing heuristic."""
    if args.s is not None:
        s = args.s
    else:
        s = default_s(ds, args.s_multiplier) if ds.p_cont else 1.0
    if args.lam is not None:
        values = _parse_list(args.lam, float)
        if len(values) == 1:
            lam = np.full(ds.p_cat, values[0])
        elif len(values) == ds.p_cat:
            lam = np.array(values)
        else:
            raise ValueError(
                f"--lambda needs 1 or {ds.p_cat} values, got {len(values)}"
            )
    elif args.lambda_offset is not None:
        upper = np.array([(l - 1) / l for l in ds.n_levels])
        lam = np.clip(upper - args.lambda_offset, 0.0, upper)
    else:
        lam = select_lambda(ds, s, categorical_weight=args.categorical_weight)
    bw = Bandwidths(s=s, lam=lam)
    bw.validate_for(ds)
    return bw


def _truth_ari(args, labels, subsample_idx):
    truth = load_labels(args.truth, column=args.truth_column)
    if subsample_idx is not None:
        truth = truth[subsample_idx]
    if truth.shape[0] != labels.shape[0]:
        raise ValueError(
            f"truth has {truth.shape[0]} labels for {labels.shape[0]} observations"
        )
    return float(ari(truth, labels))


def _preprocess(args):
    ds = _load_dataset(args)
    ds, idx = _maybe_subsample(ds, args)
    if not args.no_standardize and ds.p_cont:
        ds = standardize(ds)
    bw = _resolve_bandwidths(ds, args)
    return ds, idx, bw


def _common_manifest(args, extra) -> dict:
    params = {
        "input": args.input,
        "categorical": args.categorical,
        "schema_file": args.schema_file,
        "seed": args.seed,
        "subsample": args.subsample,
        "no_standardize": args.no_standardize,
        "s": args.s,
        "s_multiplier": args.s_multiplier,
        "lambda": args.lam,
        "lambda_offset": args.lambda_offset,
        "categorical_weight": args.categorical_weight,
        "max_n": args.max_n,
    }
    params.update(extra)
    return params


def cmd_cluster(args) -> int:
    threads = _resolve_threads(args.threads)
    outdir = _ensure_outdir(args.output_dir)
    ds, idx, bw = _preprocess(args)
    density = estimate_conditional(ds, bw, max_n=args.max_n)
    result = dib_fit_density(
        density, ds.weights, args.k, args.beta,
        restarts=args.restarts, max_iter=args.max_iter,
        rng_seed=args.seed, threads=threads,
    )
    payload = result.to_dict()
    payload["k"] = args.k
    payload["bandwidths"] = {
        "s": np.asarray(bw.s).tolist(),
        "lambda": bw.lam.tolist(),
    }
    if idx is not None:
        payload["subsample_indices"] = idx.tolist()
    if args.truth:
        payload["ari"] = _truth_ari(args, result.assign, idx)
    _write_json(os.path.join(outdir, "result.json"), payload)
    _write_assignment(os.path.join(outdir, "assignment.csv"), result.assign)
    if args.dump_density:
        np.savetxt(os.path.join(outdir, "density.csv"), density.matrix,
                   delimiter=",", fmt="%.17g")
    if args.dump_trace:
        with open(os.path.join(outdir, "trace.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "objective"])
            for i, value in enumerate(result.objective_trace, start=1):
                writer.writerow([i, repr(float(value))])
    _write_manifest(outdir, "cluster", _common_manifest(args, {
        "k": args.k, "beta": args.beta,
        "restarts": args.restarts, "max_iter": args.max_iter,
        "truth": args.truth, "truth_column": args.truth_column,
    }))
    print(f"H(T) = {result.compression:.6f}")
    print(f"I(T;Y) = {result.relevance:.6f}")
    print(f"objective = {result.objective:.6f}")
    print(f"effective_k = {result.effective_k}")
    if "ari" in payload:
        print(f"ari = {payload['ari']:.6f}")
    return EXIT_OK


def cmd_baseline(args) -> int:
    _resolve_threads(args.threads)
    outdir = _ensure_outdir(args.output_dir)
    ds = _load_dataset(args)
    ds, idx = _maybe_subsample(ds, args)
    if args.method == "kproto":
        if not args.no_standardize and ds.p_cont:
            ds = standardize(ds)
        gamma = args.gamma if args.gamma is not None else default_gamma(ds)
        restarts = args.restarts if args.restarts is not None else KPROTO_DEFAULT_RESTARTS
        labels = kprototypes_fit(
            ds, args.k, gamma=gamma, restarts=restarts,
            max_iter=args.max_iter, rng_seed=args.seed,
        )
        detail = {"gamma": gamma}
    else:
        gm = gower(ds)
        restarts = args.restarts if args.restarts is not None else PAM_DEFAULT_RESTARTS
        labels = pam_fit(
            gm, args.k, restarts=restarts, max_iter=args.max_iter, rng_seed=args.seed
        )
        detail = {}
    payload = {
        "method": args.method,
        "k": args.k,
        "assignment": [int(v) for v in labels],
        "effective_k": int(np.unique(labels).size),
        "seed": args.seed,
        **detail,
    }
    if idx is not None:
        payload["subsample_indices"] = idx.tolist()
    if args.truth:
        payload["ari"] = _truth_ari(args, np.asarray(labels), idx)
    _write_json(os.path.join(outdir, "result.json"), payload)
    _write_assignment(os.path.join(outdir, "assignment.csv"), labels)
    _write_manifest(outdir, "baseline", {
        "input": args.input, "categorical": args.categorical,
        "schema_file": args.schema_file, "method": args.method, "k": args.k,
        "gamma": args.gamma, "seed": args.seed, "restarts": restarts,
        "max_iter": args.max_iter, "subsample": args.subsample,
        "no_standardize": args.no_standardize,
        "truth": args.truth, "truth_column": args.truth_column,
    })
    print(f"method = {args.method}")
    print(f"effective_k = {payload['effective_k']}")
    if "ari" in payload:
        print(f"ari = {payload['ari']:.6f}")
    return EXIT_OK


def cmd_datagen(args) -> int:
    outdir = _ensure_outdir(args.output_dir)
    balance = BALANCE_IMBALANCED if args.balance.startswith("imbalanced") else BALANCE_EQUAL
    spec = GenSpec(
        n=args.n, p_c=args.p_c, p_d=args.p_d, levels=args.levels,
        overlap_cont=args.overlap_cont, overlap_cat=args.overlap_cat,
        balance=balance, seed=args.seed,
    )
    labeled = generate(spec)
    data_path = os.path.join(outdir, "data.csv")
    truth_path = os.path.join(outdir, "data_truth.csv")
    write_csv(labeled.data, data_path)
    with open(truth_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["truth"])
        for label in labeled.truth:
            writer.writerow([int(label)])
    sidecar = {
        "spec": {
            "n": spec.n, "p_c": spec.p_c, "p_d": spec.p_d,
            "levels": list(spec.levels),
            "overlap_cont": spec.overlap_cont, "overlap_cat": spec.overlap_cat,
            "balance": spec.balance, "seed": spec.seed,
        },
        "delta": labeled.delta,
        "categorical_masses": [
            {"pi1": pi1.tolist(), "pi2": pi2.tolist()} for pi1, pi2 in labeled.cat_masses
        ],
        "cluster_sizes": list(spec.cluster_sizes()),
    }
    _write_json(os.path.join(outdir, "data_spec.json"), sidecar)
    _write_manifest(outdir, "datagen", sidecar["spec"])
    print(f"wrote {data_path}")
    print(f"wrote {truth_path}")
    return EXIT_OK


def _parse_list(text, cast):
    return tuple(cast(tok) for tok in str(text).split(",") if tok != "")


def cmd_benchmark(args) -> int:
    threads = _resolve_threads(args.threads)
    outdir = _ensure_outdir(args.output_dir)
    results_path = os.path.join(outdir, "results.csv")
    medians_path = os.path.join(outdir, "medians.csv")
    means_path = os.path.join(outdir, "factor_means.csv")
    if args.aggregate_only:
        rows = read_results_csv(args.aggregate_only)
        write_aggregates_csv(medians_path, means_path, rows)
        print(f"wrote {medians_path}")
        print(f"wrote {means_path}")
        return EXIT_OK
    balances = tuple(
        BALANCE_IMBALANCED if b.startswith("imbalanced") else BALANCE_EQUAL
        for b in _parse_list(args.balances, str)
    )
    plan = BenchmarkPlan(
        ns=_parse_list(args.ns, int),
        p_cs=_parse_list(args.p_cs, int),
        p_ds=_parse_list(args.p_ds, int),
        levels=_parse_list(args.levels, int),
        overlaps_cont=_parse_list(args.overlaps_cont, float),
        overlaps_cat=_parse_list(args.overlaps_cat, float),
        balances=balances,
        replicates=args.replicates,
        methods=_parse_list(args.methods, str),
        seed=args.seed,
        beta=args.beta,
        restarts=args.restarts,
        max_iter=args.max_iter,
        categorical_weight=args.categorical_weight,
    )

    def progress(cell, rep, n_cells, n_reps):
        if args.progress:
            print(f"cell {cell + 1}/{n_cells} replicate {rep + 1}/{n_reps}", file=sys.stderr)

    rows = run_benchmark(plan, threads=threads, progress=progress)
    write_results_csv(results_path, rows)
    write_aggregates_csv(medians_path, means_path, rows)
    _write_manifest(outdir, "benchmark", {
        "ns": list(plan.ns), "p_cs": list(plan.p_cs), "p_ds": list(plan.p_ds),
        "levels": list(plan.levels),
        "overlaps_cont": list(plan.overlaps_cont),
        "overlaps_cat": list(plan.overlaps_cat),
        "balances": list(plan.balances), "replicates": plan.replicates,
        "methods": list(plan.methods), "seed": plan.seed, "k": plan.k,
        "beta": plan.beta, "restarts": plan.restarts, "max_iter": plan.max_iter,
        "categorical_weight": plan.categorical_weight,
    })
    n_failed = sum(1 for r in rows if r.status != "ok")
    print(f"wrote {results_path} ({len(rows)} rows, {n_failed} failed)")
    print(f"wrote {medians_path}")
    print(f"wrote {means_path}")
    return EXIT_OK


def cmd_sweep_beta(args) -> int:
    threads = _resolve_threads(args.threads)
    outdir = _ensure_outdir(args.output_dir)
    ds, idx, bw = _preprocess(args)
    betas = _parse_list(args.betas, float)
    sweep = beta_sweep(
        ds, args.k, bw, betas, restarts=args.restarts, max_iter=args.max_iter,
        rng_seed=args.seed, threads=threads, max_n=args.max_n,
    )
    curve_path = os.path.join(outdir, "curve.csv")
    with open(curve_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["beta", "compression", "relevance", "objective", "effective_k", "iterations"]
        )
        for row in sweep.rows:
            writer.writerow([
                repr(row.beta), repr(row.compression), repr(row.relevance),
                repr(row.objective), row.effective_k, row.iterations,
            ])
    payload = {
        "curve": sweep.as_columns(),
        "suggested_beta": sweep.suggested_beta,
    }
    if idx is not None:
        payload["subsample_indices"] = idx.tolist()
    _write_json(os.path.join(outdir, "sweep.json"), payload)
    _write_manifest(outdir, "sweep-beta", _common_manifest(args, {
        "k": args.k, "betas": list(betas),
        "restarts": args.restarts, "max_iter": args.max_iter,
    }))
    print(f"wrote {curve_path}")
    if sweep.suggested_beta is not None:
        print(f"suggested_beta = {sweep.suggested_beta}")
    return EXIT_OK


def cmd_score(args) -> int:
    truth = load_labels(args.truth, column=args.truth_column)
    pred = load_labels(args.pred, column=args.pred_column)
    if truth.shape[0] != pred.shape[0]:
        raise ValueError(
            f"length mismatch: truth has {truth.shape[0]} labels, "
            f"prediction has {pred.shape[0]}"
        )
    value = float(ari(truth, pred))
    print(json.dumps({"ari": value, "n": int(truth.shape[0])}))
    return EXIT_OK


def _add_io_flags(parser):
    parser.add_argument("--input", required=True, help="input CSV with a header row")
    parser.add_argument("--categorical", action="append", default=None,
                        metavar="NAME[,NAME...]",
                        help="categorical column name(s); repeatable")
    parser.add_argument("--schema-file", default=None,
                        help="CSV of name,kind rows declaring column kinds")
    parser.add_argument("--subsample", type=int, default=None,
                        help="seeded uniform row subsample to this size")
    parser.add_argument("--no-standardize", action="store_true",
                        help="skip standardizing continuous columns")
    parser.add_argument("--truth", default=None, help="CSV of true labels for ARI")
    parser.add_argument("--truth-column", default=None,
                        help="column name in the truth CSV")


def _add_bandwidth_flags(parser):
    parser.add_argument("--s", type=float, default=None,
                        help="continuous bandwidth (overrides the scaled default)")
    parser.add_argument("--s-multiplier", type=float, default=DEFAULT_S_MULTIPLIER,
                        help="multiplier c in s = c * n^(-1/(4+p_c))")
    parser.add_argument("--lambda", dest="lam", default=None,
                        metavar="VALUE[,VALUE...]",
                        help="categorical smoothing: one shared value or a comma "
                             "list, one per categorical variable")
    parser.add_argument("--lambda-offset", type=float, default=None,
                        help="set each lambda_j to (l_j-1)/l_j minus this offset")
    parser.add_argument("--categorical-weight", type=float, default=1.0,
                        help="target ratio of categorical to continuous kernel variance")
    parser.add_argument("--max-n", type=int, default=DEFAULT_MAX_N,
                        help="cap on n for the n^2 density matrix")


def _add_run_flags(parser, restarts_default):
    parser.add_argument("--seed", type=int, default=0, help="master RNG seed")
    parser.add_argument("--restarts", type=int, default=restarts_default,
                        help="number of random restarts")
    parser.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER,
                        help="iteration cap per restart")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: DIBMIX_THREADS or 1)")
    parser.add_argument("--output-dir", default=".", help="directory for output files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dibmix",
        description="Deterministic Information Bottleneck clustering for mixed-type data",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("cluster", help="fit DIB clusters to a CSV dataset")
    _add_io_flags(p)
    _add_bandwidth_flags(p)
    _add_run_flags(p, DEFAULT_RESTARTS)
    p.add_argument("--k", type=int, required=True, help="number of clusters")
    p.add_argument("--beta", type=float, default=100.0, help="relevance weight")
    p.add_argument("--dump-density", action="store_true",
                   help="also write the n x n density matrix (density.csv)")
    p.add_argument("--dump-trace", action="store_true",
                   help="also write the objective trace (trace.csv)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("baseline", help="run a comparison method")
    _add_io_flags(p)
    _add_run_flags(p, None)
    p.add_argument("--method", choices=("kproto", "pam"), required=True)
    p.add_argument("--k", type=int, required=True, help="number of clusters")
    p.add_argument("--gamma", type=float, default=None,
                   help="categorical term weight for kproto (default: Huang heuristic)")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("datagen", help="generate a synthetic two-cluster dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p-c", type=int, required=True, help="continuous variable count")
    p.add_argument("--p-d", type=int, required=True, help="categorical variable count")
    p.add_argument("--levels", type=int, default=4, help="levels per categorical variable")
    p.add_argument("--overlap-cont", type=float, default=0.3)
    p.add_argument("--overlap-cat", type=float, default=0.3)
    p.add_argument("--balance", choices=("equal", "imbalanced", BALANCE_IMBALANCED),
                   default="equal")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir", default=".")
    p.set_defaults(func=cmd_datagen)

    p = sub.add_parser("benchmark", help="run the factorial benchmark")
    p.add_argument("--ns", default="200,500,1000")
    p.add_argument("--p-cs", default="2,6")
    p.add_argument("--p-ds", default="2,6")
    p.add_argument("--levels", default="2,4,6")
    p.add_argument("--overlaps-cont", default="0.3,0.6")
    p.add_argument("--overlaps-cat", default="0.3,0.6")
    p.add_argument("--balances", default="equal,imbalanced")
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--methods", default=",".join(METHOD_NAMES))
    p.add_argument("--beta", type=float, default=100.0)
    p.add_argument("--categorical-weight", type=float, default=1.0)
    p.add_argument("--aggregate-only", default=None, metavar="RESULTS_CSV",
                   help="skip running; aggregate an existing results CSV")
    p.add_argument("--progress", action="store_true", help="report progress on stderr")
    _add_run_flags(p, DEFAULT_RESTARTS)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("sweep-beta", help="trace the relevance-compression curve")
    _add_io_flags(p)
    _add_bandwidth_flags(p)
    _add_run_flags(p, DEFAULT_RESTARTS)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--betas", required=True, help="comma-separated beta grid")
    p.set_defaults(func=cmd_sweep_beta)

    p = sub.add_parser("score", help="Adjusted Rand Index between two label files")
    p.add_argument("--truth", required=True)
    p.add_argument("--truth-column", default=None)
    p.add_argument("--pred", required=True)
    p.add_argument("--pred-column", default=None)
    p.set_defaults(func=cmd_score)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - map to exit codes at the boundary
        for exc_type, code in _ERROR_CODES:
            if isinstance(exc, exc_type):
                _emit_error(code, str(exc))
                return EXIT_USAGE
        _emit_error("internal_error", f"{type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
