"""Shared test helpers: dataset factories and independent oracles.

The oracle functions deliberately use a different computational route than
the library (explicit loops, exact integer arithmetic, quadrature) so that
agreement is evidence, not tautology.
"""

import os
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from dibmix import CATEGORICAL, CONTINUOUS, MixedDataset, VariableSchema


def make_dataset(continuous=None, categorical=None, levels=(), weights=None):
    """Small literal-dataset factory for hand-constructed cases."""
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
    kw = {} if weights is None else {"weights": np.asarray(weights, dtype=float)}
    return MixedDataset(schema=tuple(schema), continuous=cont, categorical=cat, **kw)


def random_mixed_dataset(rng, n=None, p_cont=None, p_cat=None, max_levels=6):
    """Random dataset with a random mixed schema (at least one variable)."""
    if n is None:
        n = int(rng.integers(2, 201))
    if p_cont is None:
        p_cont = int(rng.integers(0, 4))
    if p_cat is None:
        p_cat = int(rng.integers(0 if p_cont else 1, 4))
    if p_cont + p_cat == 0:
        p_cont = 1
    schema = [VariableSchema(f"x{j}", CONTINUOUS) for j in range(p_cont)]
    levels = [int(rng.integers(2, max_levels + 1)) for _ in range(p_cat)]
    schema += [
        VariableSchema(f"c{j}", CATEGORICAL, tuple(f"v{v}" for v in range(l)))
        for j, l in enumerate(levels)
    ]
    continuous = rng.standard_normal((n, p_cont))
    categorical = np.column_stack(
        [rng.integers(0, l, size=n) for l in levels]
    ) if p_cat else np.empty((n, 0), dtype=np.int64)
    return MixedDataset(schema=tuple(schema), continuous=continuous, categorical=categorical)


def random_bandwidths(rng, ds):
    """Valid random bandwidths for a dataset."""
    s = float(np.exp(rng.uniform(np.log(0.05), np.log(10.0))))
    lam = np.array([
        rng.uniform(0.0, (l - 1) / l) for l in ds.n_levels
    ])
    from dibmix import Bandwidths

    return Bandwidths(s=s, lam=lam)


def ari_pair_counting(a, b) -> float:
    """Brute-force ARI: classify every unordered pair and apply the
    pair-count identity ARI = 2(ad - bc) / ((a+b)(b+d) + (a+c)(c+d)),
    evaluated in exact rational arithmetic."""
    a = list(a)
    b = list(b)
    assert len(a) == len(b) and len(a) >= 1
    ss = sd = ds = dd = 0
    for i, j in combinations(range(len(a)), 2):
        same_a = a[i] == a[j]
        same_b = b[i] == b[j]
        if same_a and same_b:
            ss += 1
        elif same_a:
            sd += 1
        elif same_b:
            ds += 1
        else:
            dd += 1
    denominator = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd)
    if denominator == 0:
        return 1.0
    return float(Fraction(2 * (ss * dd - sd * ds), denominator))


def set_partitions(items):
    """All set partitions of ``items`` as label vectors (restricted growth)."""
    items = list(items)
    if not items:
        yield []
        return

    def rec(prefix, max_label):
        i = len(prefix)
        if i == len(items):
            yield list(prefix)
            return
        for label in range(max_label + 2):
            yield from rec(prefix + [label], max(max_label, label))

    yield from rec([], -1)


def entropy_oracle(p) -> float:
    """Entropy by plain Python accumulation."""
    total = 0.0
    for v in p:
        if v > 0:
            total -= float(v) * float(np.log(v))
    return total


def mutual_information_oracle(joint) -> float:
    """MI from entropies: H(row) + H(col) - H(joint)."""
    joint = np.asarray(joint, dtype=float)
    return (
        entropy_oracle(joint.sum(axis=1))
        + entropy_oracle(joint.sum(axis=0))
        - entropy_oracle(joint.ravel())
    )


def product_kernel_oracle(ds, i, j, s, lam) -> float:
    """Slow per-variable product kernel with explicit scalar math."""
    value = 1.0
    for c in range(ds.p_cont):
        diff = ds.continuous[i, c] - ds.continuous[j, c]
        value *= float(np.exp(-(diff**2) / (2 * s**2)) / np.sqrt(2 * np.pi))
    for d in range(ds.p_cat):
        l = ds.categorical_vars[d].n_levels
        if ds.categorical[i, d] == ds.categorical[j, d]:
            value *= 1.0 - (l - 1) * (lam[d] / (l - 1))
        else:
            value *= lam[d] / (l - 1)
    return value


def overlap_quadrature(delta: float) -> float:
    """Overlap area of N(0,1) and N(delta,1) by numeric integration of the
    pointwise minimum of the two densities."""
    from scipy.integrate import quad

    def integrand(x):
        a = np.exp(-(x**2) / 2) / np.sqrt(2 * np.pi)
        b = np.exp(-((x - delta) ** 2) / 2) / np.sqrt(2 * np.pi)
        return min(a, b)

    lo, hi = -12.0, delta + 12.0
    value, _ = quad(integrand, lo, hi, limit=400, epsabs=1e-12, epsrel=1e-12)
    return value


def dib_objective_oracle(assign, density_matrix, weights, beta, k):
    """H(T) - beta * I(T, Y) by direct summation over the joint q(t, y)."""
    n = len(assign)
    joint = np.zeros((k, n))
    for x in range(n):
        joint[assign[x]] += weights[x] * density_matrix[x]
    q_t = joint.sum(axis=1)
    p_y = joint.sum(axis=0)
    h = entropy_oracle(q_t)
    i = 0.0
    for t in range(k):
        for y in range(n):
            if joint[t, y] > 0:
                i += joint[t, y] * np.log(joint[t, y] / (q_t[t] * p_y[y]))
    return h - beta * i, h, i


@pytest.fixture(scope="session")
def data_dir() -> str:
    """Directory holding user-supplied real datasets (optional)."""
    return os.environ.get("DIBMIX_DATA_DIR", os.path.join(os.getcwd(), "data"))
