"""Kernel and conditional-density tests.

Expected numbers are either closed-form constants (1/sqrt(2*pi), indicator
limits) or values recomputed here through the scalar oracle in conftest.
"""

import numpy as np
import pytest

from dibmix import (
    CATEGORICAL,
    CONTINUOUS,
    Bandwidths,
    DegenerateSmoothingError,
    MixedDataset,
    SchemaError,
    SizeCapError,
    VariableSchema,
    aitchison_aitken,
    estimate_conditional,
    gaussian_kernel,
    kernel_matrix,
    product_kernel,
)

from conftest import product_kernel_oracle, random_bandwidths, random_mixed_dataset


def _dataset(continuous=None, categorical=None, levels=()):
    cont = np.empty((0, 0)) if continuous is None else np.asarray(continuous, dtype=float)
    if cont.ndim == 1:
        cont = cont[:, None]
    cat = None if categorical is None else np.asarray(categorical, dtype=np.int64)
    if cat is not None and cat.ndim == 1:
        cat = cat[:, None]
    n = cont.shape[0] if cont.size or cat is None else cat.shape[0]
    if cont.size == 0:
        cont = np.empty((n, 0))
    if cat is None:
        cat = np.empty((n, 0), dtype=np.int64)
    schema = [VariableSchema(f"x{j}", CONTINUOUS) for j in range(cont.shape[1])]
    schema += [
        VariableSchema(f"c{j}", CATEGORICAL, tuple(f"v{v}" for v in range(l)))
        for j, l in enumerate(levels)
    ]
    return MixedDataset(schema=tuple(schema), continuous=cont, categorical=cat)


# ---------------------------------------------------------------------------
# gaussian_kernel


def test_gaussian_kernel_at_zero_is_inverse_sqrt_2pi():
    assert gaussian_kernel(0.0, 1.0) == 1.0 / np.sqrt(2.0 * np.pi)
    assert gaussian_kernel(0.0, 1.0) == pytest.approx(0.3989422804014327, rel=1e-15)


def test_gaussian_kernel_unit_values():
    assert gaussian_kernel(1.0, 1.0) == pytest.approx(0.24197072451914337, rel=1e-15)
    assert gaussian_kernel(-1.0, 1.0) == gaussian_kernel(1.0, 1.0)


def test_gaussian_kernel_scale_symmetry():
    # Only diff/s enters, so (diff=2, s=2) matches (diff=1, s=1).
    assert gaussian_kernel(2.0, 2.0) == gaussian_kernel(1.0, 1.0)


def test_gaussian_kernel_vectorized_and_errors():
    out = gaussian_kernel(np.array([0.0, 1.0]), 1.0)
    np.testing.assert_allclose(out, [0.3989422804014327, 0.24197072451914337], rtol=1e-15)
    with pytest.raises(ValueError):
        gaussian_kernel(1.0, 0.0)
    with pytest.raises(ValueError):
        gaussian_kernel(1.0, -2.0)


# ---------------------------------------------------------------------------
# aitchison_aitken


def test_aitchison_aitken_indicator_limit():
    assert aitchison_aitken(True, 0.0, 3) == 1.0
    assert aitchison_aitken(False, 0.0, 3) == 0.0


def test_aitchison_aitken_direct_substitution():
    assert aitchison_aitken(True, 0.3, 4) == pytest.approx(0.7, rel=1e-15)
    assert aitchison_aitken(False, 0.3, 4) == pytest.approx(0.1, rel=1e-15)


def test_aitchison_aitken_uninformative_upper_range():
    # lam = (l-1)/l makes every level equally likely: 1/l on and off match.
    match = aitchison_aitken(True, 0.8, 5)
    mismatch = aitchison_aitken(False, 0.8, 5)
    assert mismatch == 0.2
    assert match == pytest.approx(0.2, rel=1e-14)


def test_aitchison_aitken_mass_is_exactly_one():
    rng = np.random.default_rng(11)
    for levels in range(2, 9):
        for lam in rng.uniform(0.0, (levels - 1) / levels, size=25):
            match = aitchison_aitken(True, lam, levels)
            mismatch = aitchison_aitken(False, lam, levels)
            assert match + (levels - 1) * mismatch == 1.0


def test_aitchison_aitken_errors():
    with pytest.raises(ValueError):
        aitchison_aitken(True, -0.1, 3)
    with pytest.raises(ValueError):
        aitchison_aitken(True, 0.7, 3)  # above (3-1)/3
    with pytest.raises(ValueError):
        aitchison_aitken(True, 0.0, 1)


# ---------------------------------------------------------------------------
# Bandwidths


def test_bandwidths_validation():
    with pytest.raises(ValueError):
        Bandwidths(s=0.0)
    with pytest.raises(ValueError):
        Bandwidths(s=np.inf)
    with pytest.raises(ValueError):
        Bandwidths(s=1.0, lam=[-0.1])
    ds = _dataset(continuous=[[0.0], [1.0]], categorical=[0, 1], levels=(3,))
    with pytest.raises(SchemaError):
        Bandwidths(s=1.0, lam=[0.1, 0.2]).validate_for(ds)
    with pytest.raises(ValueError):
        Bandwidths(s=1.0, lam=[0.9]).validate_for(ds)  # above (3-1)/3


# ---------------------------------------------------------------------------
# product_kernel


def test_product_kernel_identical_point_mixed():
    ds = _dataset(continuous=[0.4, 1.3], categorical=[2, 1], levels=(4,))
    bw = Bandwidths(s=1.0, lam=[0.3])
    # Self-comparison: gaussian at 0 times the categorical match value.
    assert product_kernel(ds, 0, 0, bw) == pytest.approx(0.2792595962810029, rel=1e-15)


def test_product_kernel_all_categorical_full_mismatch():
    ds = _dataset(categorical=[[0, 1], [2, 3]], levels=(4, 4))
    bw = Bandwidths(s=1.0, lam=[0.3, 0.3])
    assert product_kernel(ds, 0, 1, bw) == pytest.approx(0.01, rel=1e-14)


def test_product_kernel_indicator_mismatch_is_zero():
    ds = _dataset(categorical=[0, 1], levels=(2,))
    bw = Bandwidths(s=1.0, lam=[0.0])
    assert product_kernel(ds, 0, 1, bw) == 0.0


def test_product_kernel_matches_scalar_oracle_and_symmetry():
    rng = np.random.default_rng(23)
    for _ in range(20):
        ds = random_mixed_dataset(rng, n=8)
        bw = random_bandwidths(rng, ds)
        for i in range(ds.n):
            for j in range(ds.n):
                got = product_kernel(ds, i, j, bw)
                assert got == product_kernel(ds, j, i, bw)  # exact symmetry
                want = product_kernel_oracle(ds, i, j, bw.s, bw.lam)
                assert got == pytest.approx(want, rel=1e-12, abs=1e-300)


def test_kernel_matrix_agrees_with_pairwise_product_kernel():
    rng = np.random.default_rng(7)
    ds = random_mixed_dataset(rng, n=12, p_cont=2, p_cat=2)
    bw = random_bandwidths(rng, ds)
    matrix = kernel_matrix(ds, bw)
    np.testing.assert_array_equal(matrix, matrix.T)
    for i in range(ds.n):
        for j in range(ds.n):
            assert matrix[i, j] == pytest.approx(
                product_kernel(ds, i, j, bw), rel=1e-12, abs=1e-300
            )


# ---------------------------------------------------------------------------
# estimate_conditional


def test_estimate_conditional_single_point():
    ds = _dataset(continuous=[3.7])
    density = estimate_conditional(ds, Bandwidths(s=1.0))
    np.testing.assert_array_equal(density.matrix, [[1.0]])
    np.testing.assert_array_equal(density.marginal_y, [1.0])


def test_estimate_conditional_identical_observations():
    ds = _dataset(continuous=[1.0, 1.0])
    density = estimate_conditional(ds, Bandwidths(s=2.0))
    np.testing.assert_allclose(density.matrix, [[0.5, 0.5], [0.5, 0.5]], rtol=0, atol=0)
    np.testing.assert_allclose(density.marginal_y, [0.5, 0.5], rtol=0, atol=0)


def test_estimate_conditional_three_point_hand_case():
    # Unnormalized row 0 is (K(0), K(1), K(10)); dividing by the sum gives
    # the values below (recomputed with scalar math).
    ds = _dataset(continuous=[0.0, 1.0, 10.0])
    density = estimate_conditional(ds, Bandwidths(s=1.0))
    np.testing.assert_allclose(
        density.matrix[0],
        [0.6224593312018546, 0.37754066879814546, 1.200568340419299e-22],
        rtol=1e-12,
    )
    assert density.matrix[0, 2] > 0.0


def test_estimate_conditional_rows_are_distributions():
    rng = np.random.default_rng(101)
    for _ in range(30):
        ds = random_mixed_dataset(rng, n=int(rng.integers(2, 40)))
        bw = random_bandwidths(rng, ds)
        density = estimate_conditional(ds, bw)
        assert np.all(density.matrix >= 0.0)
        np.testing.assert_allclose(density.matrix.sum(axis=1), 1.0, atol=1e-9)
        assert density.marginal_y.sum() == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(density.marginal_y, ds.weights @ density.matrix)


def test_estimate_conditional_weighted_marginal():
    ds = MixedDataset(
        schema=(VariableSchema("x", CONTINUOUS),),
        continuous=np.array([[0.0], [1.0], [2.0]]),
        categorical=np.empty((3, 0), dtype=np.int64),
        weights=np.array([0.5, 0.25, 0.25]),
    )
    density = estimate_conditional(ds, Bandwidths(s=1.0))
    np.testing.assert_allclose(
        density.marginal_y,
        0.5 * density.matrix[0] + 0.25 * density.matrix[1] + 0.25 * density.matrix[2],
    )


def test_estimate_conditional_large_s_approaches_uniform():
    rng = np.random.default_rng(3)
    ds = _dataset(continuous=rng.standard_normal((25, 2)))
    density = estimate_conditional(ds, Bandwidths(s=1e6))
    np.testing.assert_allclose(density.matrix, 1.0 / 25.0, atol=1e-6)


def test_estimate_conditional_size_cap():
    ds = _dataset(continuous=np.arange(5.0))
    with pytest.raises(SizeCapError):
        estimate_conditional(ds, Bandwidths(s=1.0), max_n=4)
    estimate_conditional(ds, Bandwidths(s=1.0), max_n=5)  # boundary admits n == max_n


def test_estimate_conditional_degenerate_underflow():
    # With 900 continuous variables the self term (1/sqrt(2*pi))^900
    # underflows to exactly zero, so every row sum vanishes.
    ds = _dataset(continuous=np.zeros((2, 900)))
    with pytest.raises(DegenerateSmoothingError):
        estimate_conditional(ds, Bandwidths(s=1.0))
