"""A small factorial benchmark, run in-process.

Sweeps sample size and categorical overlap on a reduced grid, runs all
three methods with a few replicates per cell, and prints per-method
median ARI plus a per-factor breakdown.  The full default grid (288
cells x 100 replicates) has the same structure; see the `benchmark` CLI
subcommand.
"""

from dibmix import BenchmarkPlan, factor_means, method_medians, run_benchmark


def main():
    plan = BenchmarkPlan(
        ns=(100, 300),
        p_cs=(2,),
        p_ds=(2,),
        levels=(4,),
        overlaps_cont=(0.3,),
        overlaps_cat=(0.3, 0.6),
        balances=("equal",),
        replicates=5,
        restarts=25,
        seed=0,
    )
    cells = plan.cells()
    print(f"{len(cells)} cells x {plan.replicates} replicates x "
          f"{len(plan.methods)} methods")

    rows = run_benchmark(plan, threads=4)
    failed = sum(r.status != "ok" for r in rows)
    print(f"{len(rows)} result rows, {failed} failed\n")

    print("median ARI per method:")
    for method, median in sorted(method_medians(rows).items()):
        print(f"  {method:<14} {median:.4f}")

    for factor in ("n", "overlap_cat"):
        print(f"\nmean ARI by {factor}:")
        table = factor_means(rows, factor)
        for (value, method), mean in sorted(table.items()):
            print(f"  {factor}={value:<6} {method:<14} {mean:.4f}")


if __name__ == "__main__":
    main()
