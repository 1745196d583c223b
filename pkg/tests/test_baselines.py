"""Baseline-method tests: Gower dissimilarity, PAM, K-Prototypes.

PAM's converged medoid sets are verified against an exhaustive swap search;
K-Prototypes objectives are recomputed from labels with a from-scratch
means/modes evaluation.
"""

import numpy as np
import pytest

from dibmix import (
    GowerMatrix,
    ZeroVarianceError,
    ari,
    default_gamma,
    gower,
    kprototypes_chain,
    kprototypes_fit,
    pam_fit,
    standardize,
)
from dibmix.baselines import _pam_build, _pam_swap

from conftest import make_dataset, random_mixed_dataset


def _kproto_objective_from_labels(ds, labels, gamma, k):
    """Recompute the K-Prototypes objective from labels alone: refit the
    means/modes, then sum per-point costs with explicit loops."""
    total = 0.0
    for t in range(k):
        members = np.flatnonzero(labels == t)
        if members.size == 0:
            continue
        mean = ds.continuous[members].mean(axis=0) if ds.p_cont else None
        modes = [
            int(np.argmax(np.bincount(ds.categorical[members, j])))
            for j in range(ds.p_cat)
        ]
        for i in members:
            if ds.p_cont:
                diff = ds.continuous[i] - mean
                total += float(diff @ diff)
            for j in range(ds.p_cat):
                total += gamma * (ds.categorical[i, j] != modes[j])
    return total


def _pam_cost(d, medoids):
    return float(d[:, list(medoids)].min(axis=1).sum())


# ---------------------------------------------------------------------------
# gower


def test_gower_identical_rows_zero():
    ds = make_dataset(continuous=[[1.0, 2.0], [1.0, 2.0], [3.0, 4.0]],
                      categorical=[0, 0, 1], levels=(2,))
    gm = gower(ds)
    assert gm.matrix[0, 1] == 0.0
    assert gm.matrix[0, 0] == 0.0


def test_gower_maximally_different_rows_one():
    ds = make_dataset(continuous=[0.0, 10.0], categorical=[0, 1], levels=(2,))
    gm = gower(ds)
    assert gm.matrix[0, 1] == 1.0


def test_gower_hand_case():
    # continuous range 10 with diff 5 (0.5) plus one mismatch (1) over p=2.
    ds = make_dataset(continuous=[0.0, 5.0, 10.0], categorical=[0, 1, 0], levels=(2,))
    gm = gower(ds)
    assert gm.matrix[0, 1] == pytest.approx(0.75, rel=1e-15)
    np.testing.assert_array_equal(gm.ranges, [10.0])


def test_gower_bounds_symmetry_random():
    rng = np.random.default_rng(15)
    for _ in range(10):
        ds = random_mixed_dataset(rng, n=25)
        gm = gower(ds)
        np.testing.assert_array_equal(gm.matrix, gm.matrix.T)
        np.testing.assert_array_equal(np.diag(gm.matrix), 0.0)
        assert gm.matrix.min() >= 0.0
        assert gm.matrix.max() <= 1.0 + 1e-12


def test_gower_zero_range_error():
    ds = make_dataset(continuous=np.ones(5), categorical=np.arange(5) % 2, levels=(2,))
    with pytest.raises(ZeroVarianceError):
        gower(ds)


# ---------------------------------------------------------------------------
# pam


def _block_matrix(sizes, within=0.1, between=0.9):
    n = sum(sizes)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    matrix = np.where(labels[:, None] == labels[None, :], within, between)
    np.fill_diagonal(matrix, 0.0)
    return GowerMatrix(matrix=matrix, ranges=np.empty(0)), labels


def test_pam_k_equals_n_zero_cost():
    rng = np.random.default_rng(2)
    ds = make_dataset(continuous=rng.standard_normal(8))
    gm = gower(ds)
    labels = pam_fit(gm, k=8)
    np.testing.assert_array_equal(labels, np.arange(8))
    assert _pam_cost(gm.matrix, range(8)) == 0.0


def test_pam_two_blocks_recovered():
    gm, truth = _block_matrix([6, 9])
    labels = pam_fit(gm, k=2)
    assert ari(labels, truth) == 1.0


def test_pam_k1_all_one_cluster():
    gm, _ = _block_matrix([4, 4])
    np.testing.assert_array_equal(pam_fit(gm, k=1), 0)


def test_pam_build_k1_minimizes_row_sum():
    rng = np.random.default_rng(3)
    raw = rng.uniform(0.1, 1.0, size=(12, 12))
    d = (raw + raw.T) / 2
    np.fill_diagonal(d, 0.0)
    medoids = _pam_build(d, 1)
    assert medoids[0] == int(np.argmin(d.sum(axis=0)))


def test_pam_swap_reaches_local_optimum():
    # Exhaustive check: at convergence no single (medoid, candidate) swap
    # lowers the total nearest-medoid dissimilarity.
    rng = np.random.default_rng(7)
    for trial in range(5):
        n = int(rng.integers(15, 50))
        ds = random_mixed_dataset(rng, n=n)
        d = gower(ds).matrix
        k = int(rng.integers(2, 6))
        medoids = _pam_swap(d, _pam_build(d, k), max_iter=100)
        base = _pam_cost(d, medoids)
        for pos in range(k):
            for h in range(n):
                if h in medoids:
                    continue
                trial_medoids = list(medoids)
                trial_medoids[pos] = h
                assert _pam_cost(d, trial_medoids) >= base - 1e-12


def _labeling_cost(d, labels):
    """k-medoids objective of a labeling: per cluster, the best in-cluster
    medoid's dissimilarity sum."""
    total = 0.0
    for t in np.unique(labels):
        members = np.flatnonzero(labels == t)
        total += float(d[np.ix_(members, members)].sum(axis=0).min())
    return total


def test_pam_deterministic_and_restarts_never_worse():
    rng = np.random.default_rng(4)
    ds = random_mixed_dataset(rng, n=40)
    gm = gower(ds)
    a = pam_fit(gm, k=3, restarts=5, rng_seed=9)
    b = pam_fit(gm, k=3, restarts=5, rng_seed=9)
    np.testing.assert_array_equal(a, b)
    build_only = pam_fit(gm, k=3, restarts=1)
    # restart 0 is the deterministic BUILD start, so adding random restarts
    # can only match or improve the objective
    assert _labeling_cost(gm.matrix, a) <= _labeling_cost(gm.matrix, build_only) + 1e-9


def test_pam_errors():
    gm, _ = _block_matrix([3, 3])
    with pytest.raises(ValueError):
        pam_fit(gm, k=7)
    with pytest.raises(ValueError):
        pam_fit(gm, k=0)


# ---------------------------------------------------------------------------
# k-prototypes


def test_kproto_k1_means_modes_objective():
    ds = make_dataset(continuous=[0.0, 2.0, 4.0], categorical=[0, 0, 1], levels=(2,))
    labels, obj, trace = kprototypes_chain(ds, k=1, gamma=2.0, rng_seed=0)
    np.testing.assert_array_equal(labels, 0)
    # mean 2: squared deviations 4+0+4 = 8; mode 0: one mismatch * gamma = 2
    assert obj == pytest.approx(10.0, rel=1e-12)
    assert obj == pytest.approx(_kproto_objective_from_labels(ds, labels, 2.0, 1), rel=1e-12)


def test_kproto_identical_rows_zero_objective():
    ds = make_dataset(continuous=np.ones((6, 2)), categorical=np.ones(6, dtype=int),
                      levels=(3,))
    for k in (1, 2, 3):
        labels, obj, _ = kprototypes_chain(ds, k=k, rng_seed=1)
        assert obj == 0.0


def test_kproto_gamma_zero_is_kmeans_on_blobs():
    rng = np.random.default_rng(11)
    x = np.concatenate([rng.normal(0, 0.1, 30), rng.normal(10, 0.1, 30)])
    cat = rng.integers(0, 3, size=60)  # noise; gamma=0 must ignore it
    ds = make_dataset(continuous=x, categorical=cat, levels=(3,))
    truth = np.repeat([0, 1], 30)
    labels = kprototypes_fit(ds, k=2, gamma=0.0, restarts=5, rng_seed=0)
    assert ari(labels, truth) == 1.0


def test_kproto_trace_non_increasing():
    rng = np.random.default_rng(21)
    for trial in range(30):
        ds = random_mixed_dataset(rng, n=int(rng.integers(10, 60)))
        k = int(rng.integers(1, 5))
        _, obj, trace = kprototypes_chain(ds, k=k, rng_seed=trial)
        diffs = np.diff(trace)
        assert np.all(diffs <= 1e-9)
        assert obj == pytest.approx(trace[-1], abs=1e-9)


def test_kproto_fit_objective_matches_label_recomputation():
    rng = np.random.default_rng(5)
    ds = random_mixed_dataset(rng, n=50, p_cont=2, p_cat=2)
    gamma = 1.5
    labels, obj, _ = kprototypes_chain(ds, k=3, gamma=gamma, rng_seed=2)
    assert obj == pytest.approx(_kproto_objective_from_labels(ds, labels, gamma, 3), rel=1e-10)


def test_kproto_restarts_never_worse():
    rng = np.random.default_rng(6)
    ds = random_mixed_dataset(rng, n=60, p_cont=2, p_cat=1)
    single = kprototypes_fit(ds, k=4, restarts=1, rng_seed=3)
    multi = kprototypes_fit(ds, k=4, restarts=10, rng_seed=3)
    gamma = default_gamma(ds)
    assert _kproto_objective_from_labels(ds, multi, gamma, 4) <= (
        _kproto_objective_from_labels(ds, single, gamma, 4) + 1e-9
    )


def test_kproto_deterministic():
    rng = np.random.default_rng(8)
    ds = random_mixed_dataset(rng, n=45)
    a = kprototypes_fit(ds, k=3, restarts=4, rng_seed=12)
    b = kprototypes_fit(ds, k=3, restarts=4, rng_seed=12)
    np.testing.assert_array_equal(a, b)


def test_default_gamma():
    ds = make_dataset(continuous=[0.0, 2.0], categorical=[0, 1], levels=(2,))
    assert default_gamma(ds) == 2.0  # ddof=1 variance of (0, 2)
    cat_only = make_dataset(categorical=[0, 1, 2], levels=(3,))
    assert default_gamma(cat_only) == 1.0
    rng = np.random.default_rng(9)
    standardized = standardize(make_dataset(continuous=rng.standard_normal((40, 3))))
    assert default_gamma(standardized) == pytest.approx(1.0, abs=1e-12)


def test_kproto_errors():
    ds = make_dataset(continuous=[0.0, 1.0])
    with pytest.raises(ValueError):
        kprototypes_fit(ds, k=3)
    with pytest.raises(ValueError):
        kprototypes_fit(ds, k=1, gamma=-0.5)
