"""External cluster-validity scoring: the Adjusted Rand Index.

Reference: Hubert, L. and Arabie, P. (1985). Comparing partitions.
Journal of Classification 2, 193-218.
"""

import numpy as np


def _codes(labels) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ValueError("partition labels must be one-dimensional")
    if labels.shape[0] == 0:
        raise ValueError("partition is empty")
    _, codes = np.unique(labels, return_inverse=True)
    return codes


def contingency(a, b) -> np.ndarray:
    """Cross-tabulate two partitions: entry (i, j) counts observations in
    cluster i of ``a`` and cluster j of ``b``.  Labels may be any comparable
    codes; rows/columns follow sorted label order."""
    a = _codes(a)
    b = _codes(b)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"partition lengths differ: {a.shape[0]} vs {b.shape[0]}")
    n_a = int(a.max()) + 1
    n_b = int(b.max()) + 1
    table = np.zeros((n_a, n_b), dtype=np.int64)
    np.add.at(table, (a, b), 1)
    return table


def _comb2(x: int) -> int:
    return x * (x - 1) // 2


def ari(a, b) -> float:
    """Adjusted Rand Index between two partitions of the same set.

    Computed from the contingency table with exact integer arithmetic:

        ARI = (sum_ij C(n_ij,2) - E) / (max_index - E),
        E = sum_i C(a_i,2) * sum_j C(b_j,2) / C(n,2),
        max_index = [sum_i C(a_i,2) + sum_j C(b_j,2)] / 2.

    When both partitions are single-cluster the index is 0/0; they are then
    identical, so 1.0 is returned (standard convention, and required because
    compression-only clustering runs produce single clusters).
    """
    table = contingency(a, b)
    n = int(table.sum())
    sum_ij = sum(_comb2(int(v)) for v in table.ravel())
    sum_a = sum(_comb2(int(v)) for v in table.sum(axis=1))
    sum_b = sum(_comb2(int(v)) for v in table.sum(axis=0))
    total = _comb2(n)
    # Scale by 2*C(n,2) to keep everything in exact integers:
    # numerator = sum_ij - sum_a*sum_b/total, denominator = (sum_a+sum_b)/2 - same.
    numerator = 2 * total * sum_ij - 2 * sum_a * sum_b
    denominator = total * (sum_a + sum_b) - 2 * sum_a * sum_b
    if denominator == 0:
        # Both partitions single-cluster (identical), or n = 1.
        return 1.0
    return numerator / denominator
