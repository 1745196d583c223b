"""Factorial benchmark: generate synthetic cells, run each method, score ARI.

The full default grid crosses sample size (200, 500, 1000), continuous and
categorical feature counts (2, 6), categorical levels (2, 4, 6), continuous
and categorical overlap (0.3, 0.6, varied independently) and cluster balance
(equal, 3:1) — 288 cells, 28,800 datasets at 100 replicates.  One result row
is emitted per (cell, replicate, method) whether the run succeeded or not.
"""

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from statistics import mean, median

import numpy as np

from .bandwidth import BalanceSpec, choose_bandwidths
from .baselines import gower, kprototypes_fit, pam_fit
from .datagen import BALANCE_EQUAL, BALANCE_IMBALANCED, GenSpec, generate
from .dataset import standardize
from .dib import dib_fit
from .metrics import ari
from .seeding import STREAM_DATAGEN, STREAM_METHOD, derive_seed

METHOD_DIBMIX = "dibmix"
METHOD_KPROTOTYPES = "kprototypes"
METHOD_GOWER_PAM = "gower_pam"
METHOD_NAMES = (METHOD_DIBMIX, METHOD_KPROTOTYPES, METHOD_GOWER_PAM)

RESULT_COLUMNS = (
    "cell",
    "n",
    "p_c",
    "p_d",
    "levels",
    "overlap_cont",
    "overlap_cat",
    "balance",
    "replicate",
    "method",
    "status",
    "ari",
    "effective_k",
    "runtime_s",
    "error",
)

FACTOR_COLUMNS = ("n", "p_c", "p_d", "levels", "overlap_cont", "overlap_cat", "balance")


@dataclass(frozen=True)
class BenchmarkPlan:
    """Factor grid plus solver settings; the default grid is the full
    factorial design."""

    ns: tuple = (200, 500, 1000)
    p_cs: tuple = (2, 6)
    p_ds: tuple = (2, 6)
    levels: tuple = (2, 4, 6)
    overlaps_cont: tuple = (0.3, 0.6)
    overlaps_cat: tuple = (0.3, 0.6)
    balances: tuple = (BALANCE_EQUAL, BALANCE_IMBALANCED)
    replicates: int = 100
    methods: tuple = METHOD_NAMES
    seed: int = 0
    k: int = 2
    beta: float = 100.0
    restarts: int = 100
    max_iter: int = 100
    categorical_weight: float = 1.0

    def __post_init__(self):
        for name in ("ns", "p_cs", "p_ds", "levels", "overlaps_cont", "overlaps_cat",
                     "balances", "methods"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        grid_axes = (self.ns, self.p_cs, self.p_ds, self.levels,
                     self.overlaps_cont, self.overlaps_cat, self.balances)
        if any(len(axis) == 0 for axis in grid_axes):
            raise ValueError("benchmark grid is empty")
        unknown = set(self.methods) - set(METHOD_NAMES)
        if unknown or not self.methods:
            raise ValueError(f"methods must be a non-empty subset of {METHOD_NAMES}")

    def cells(self) -> tuple:
        """Factor combinations in canonical order; the position is the cell id."""
        return tuple(
            {"n": n, "p_c": p_c, "p_d": p_d, "levels": levels,
             "overlap_cont": oc, "overlap_cat": od, "balance": balance}
            for n, p_c, p_d, levels, oc, od, balance in product(
                self.ns, self.p_cs, self.p_ds, self.levels,
                self.overlaps_cont, self.overlaps_cat, self.balances,
            )
        )


@dataclass(frozen=True)
class ResultRow:
    cell: int
    n: int
    p_c: int
    p_d: int
    levels: int
    overlap_cont: float
    overlap_cat: float
    balance: str
    replicate: int
    method: str
    status: str
    ari: float = None
    effective_k: int = None
    runtime_s: float = None
    error: str = ""

    def as_record(self) -> dict:
        return {
            "cell": self.cell,
            "n": self.n,
            "p_c": self.p_c,
            "p_d": self.p_d,
            "levels": self.levels,
            "overlap_cont": repr(self.overlap_cont),
            "overlap_cat": repr(self.overlap_cat),
            "balance": self.balance,
            "replicate": self.replicate,
            "method": self.method,
            "status": self.status,
            "ari": "" if self.ari is None else repr(self.ari),
            "effective_k": "" if self.effective_k is None else self.effective_k,
            "runtime_s": "" if self.runtime_s is None else f"{self.runtime_s:.6f}",
            "error": self.error,
        }


def _run_method(method, labeled, plan, method_seed):
    data = labeled.data
    if method == METHOD_DIBMIX:
        std = standardize(data)
        bw = choose_bandwidths(std, BalanceSpec(categorical_weight=plan.categorical_weight))
        res = dib_fit(std, plan.k, plan.beta, bw, restarts=plan.restarts,
                      max_iter=plan.max_iter, rng_seed=method_seed)
        return res.assign, res.effective_k
    if method == METHOD_KPROTOTYPES:
        std = standardize(data)
        labels = kprototypes_fit(std, plan.k, restarts=plan.restarts,
                                 max_iter=plan.max_iter, rng_seed=method_seed)
        return labels, int(np.unique(labels).size)
    if method == METHOD_GOWER_PAM:
        labels = pam_fit(gower(data), plan.k, restarts=plan.restarts,
                         max_iter=plan.max_iter, rng_seed=method_seed)
        return labels, int(np.unique(labels).size)
    raise ValueError(f"unknown method {method!r}")


def _run_replicate(plan, cell_index, factors, rep):
    data_seed = derive_seed(plan.seed, STREAM_DATAGEN, cell_index, rep)
    spec = GenSpec(
        n=factors["n"], p_c=factors["p_c"], p_d=factors["p_d"],
        levels=(factors["levels"],) * factors["p_d"],
        overlap_cont=factors["overlap_cont"], overlap_cat=factors["overlap_cat"],
        balance=factors["balance"], seed=data_seed,
    )
    labeled = generate(spec)
    rows = []
    for method in plan.methods:
        method_seed = derive_seed(
            plan.seed, STREAM_METHOD, cell_index, rep, METHOD_NAMES.index(method)
        )
        start = time.perf_counter()
        try:
            labels, effective_k = _run_method(method, labeled, plan, method_seed)
            row = ResultRow(
                cell=cell_index, replicate=rep, method=method, status="ok",
                ari=float(ari(labeled.truth, labels)), effective_k=effective_k,
                runtime_s=time.perf_counter() - start, **factors,
            )
        except Exception as exc:  # noqa: BLE001 - failed runs become rows
            row = ResultRow(
                cell=cell_index, replicate=rep, method=method, status="error",
                runtime_s=time.perf_counter() - start,
                error=f"{type(exc).__name__}: {exc}", **factors,
            )
        rows.append(row)
    return rows


def run_benchmark(plan: BenchmarkPlan, threads: int = 1, progress=None) -> tuple:
    """Run the plan; rows come back sorted by (cell, replicate, method order)
    so output is independent of scheduling."""
    cells = plan.cells()
    tasks = [(ci, factors, rep)
             for ci, factors in enumerate(cells)
             for rep in range(plan.replicates)]

    def run(task):
        ci, factors, rep = task
        rows = _run_replicate(plan, ci, factors, rep)
        if progress is not None:
            progress(ci, rep, len(cells), plan.replicates)
        return rows

    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            nested = list(pool.map(run, tasks))
    else:
        nested = [run(t) for t in tasks]
    return tuple(row for rows in nested for row in rows)


def write_results_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.as_record())


def read_results_csv(path) -> tuple:
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                ResultRow(
                    cell=int(rec["cell"]), n=int(rec["n"]), p_c=int(rec["p_c"]),
                    p_d=int(rec["p_d"]), levels=int(rec["levels"]),
                    overlap_cont=float(rec["overlap_cont"]),
                    overlap_cat=float(rec["overlap_cat"]), balance=rec["balance"],
                    replicate=int(rec["replicate"]), method=rec["method"],
                    status=rec["status"],
                    ari=float(rec["ari"]) if rec["ari"] else None,
                    effective_k=int(rec["effective_k"]) if rec["effective_k"] else None,
                    runtime_s=float(rec["runtime_s"]) if rec["runtime_s"] else None,
                    error=rec.get("error", ""),
                )
            )
    return tuple(rows)


def method_medians(rows) -> dict:
    """Median ARI per method over successful rows (the headline comparison)."""
    by_method = {}
    for row in rows:
        if row.status == "ok":
            by_method.setdefault(row.method, []).append(row.ari)
    return {m: float(median(v)) for m, v in sorted(by_method.items())}


def factor_means(rows, factor: str) -> dict:
    """Mean ARI per (factor level, method) over successful rows — one panel
    of the per-condition comparison."""
    if factor not in FACTOR_COLUMNS:
        raise ValueError(f"unknown factor {factor!r}; choose from {FACTOR_COLUMNS}")
    table = {}
    for row in rows:
        if row.status == "ok":
            table.setdefault((getattr(row, factor), row.method), []).append(row.ari)
    return {key: float(mean(v)) for key, v in sorted(table.items())}


def write_aggregates_csv(median_path, means_path, rows) -> None:
    with open(median_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "median_ari", "n_ok"])
        ok_counts = {}
        for row in rows:
            if row.status == "ok":
                ok_counts[row.method] = ok_counts.get(row.method, 0) + 1
        for m, value in method_medians(rows).items():
            writer.writerow([m, repr(value), ok_counts[m]])
    with open(means_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["factor", "level", "method", "mean_ari"])
        for factor in FACTOR_COLUMNS:
            for (level, m), value in factor_means(rows, factor).items():
                writer.writerow([factor, level, m, repr(value)])
