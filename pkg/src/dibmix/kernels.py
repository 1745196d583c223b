"""Product-kernel density estimation for mixed variables.

The conditional density p(y | x) over the observed points is estimated with
a generalized product kernel: a Gaussian factor per continuous variable and
an Aitchison-Aitken factor per unordered categorical variable.  Rows are
normalized to probability vectors, so the usual 1/(n s) prefactor of the
raw density estimate cancels and is not represented.

References
----------
Aitchison, J. and Aitken, C.G.G. (1976). Multivariate binary discrimination
    by the kernel method. Biometrika 63.
Li, Q. and Racine, J. (2003). Nonparametric estimation of distributions
    with categorical and continuous data. J. Multivariate Analysis 86.
"""

from dataclasses import dataclass

import numpy as np

from .dataset import MixedDataset
from .errors import DegenerateSmoothingError, SchemaError, SizeCapError

_SQRT_2PI = float(np.sqrt(2.0 * np.pi))

DEFAULT_MAX_N = 10_000


def gaussian_kernel(diff, s):
    """Gaussian kernel value exp(-diff^2 / (2 s^2)) / sqrt(2 pi).

    ``diff`` may be an array; ``s`` must be positive.  This is s times the
    N(0, s^2) density at ``diff``; the leftover 1/s belongs to the overall
    estimator prefactor, which cancels under row normalization.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise ValueError("continuous bandwidth s must be positive")
    d = np.asarray(diff, dtype=float)
    out = np.exp(-(d * d) / (2.0 * s * s)) / _SQRT_2PI
    return out if out.ndim else float(out)


def aitchison_aitken(match, lam, levels):
    """Aitchison-Aitken kernel: 1 - lam on a level match, lam/(levels-1) off it.

    Admissible range is 0 <= lam <= (levels-1)/levels; lam = 0 recovers the
    binary indicator.  The match value is computed as
    1 - (levels-1) * (lam / (levels-1)) so that the kernel mass over all
    levels is exactly 1 in floating point (at most one ulp from 1 - lam).
    """
    levels = int(levels)
    if levels < 2:
        raise ValueError("categorical variable must have at least 2 levels")
    lam = float(lam)
    if not 0.0 <= lam <= (levels - 1) / levels:
        raise ValueError(
            f"lambda={lam!r} outside admissible range [0, {(levels - 1) / levels!r}] "
            f"for {levels} levels"
        )
    mismatch = lam / (levels - 1)
    match_value = 1.0 - (levels - 1) * mismatch
    return np.where(match, match_value, mismatch) if np.ndim(match) else (
        match_value if match else mismatch
    )


@dataclass(frozen=True)
class Bandwidths:
    """Smoothing parameters: continuous ``s`` and categorical ``lam``.

    ``s`` is a positive scalar shared by all continuous variables (the
    normal use after standardization) or a per-variable vector.  ``lam``
    holds one value per categorical variable, each within
    [0, (levels-1)/levels] for that variable's level count.
    """

    s: float = 1.0
    lam: np.ndarray = ()

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        if np.any(s <= 0) or not np.all(np.isfinite(s)):
            raise ValueError("continuous bandwidth s must be positive and finite")
        lam = np.asarray(self.lam, dtype=float).reshape(-1)
        if np.any(lam < 0) or not np.all(np.isfinite(lam)):
            raise ValueError("categorical bandwidths must be finite and nonnegative")
        lam.flags.writeable = False
        object.__setattr__(self, "s", float(s) if s.ndim == 0 else s)
        object.__setattr__(self, "lam", lam)

    def s_per_variable(self, p_cont: int) -> np.ndarray:
        s = np.asarray(self.s, dtype=float)
        if s.ndim == 0:
            return np.full(p_cont, float(s))
        if s.shape != (p_cont,):
            raise SchemaError(f"s vector has shape {s.shape}, expected ({p_cont},)")
        return s

    def validate_for(self, ds: MixedDataset) -> None:
        self.s_per_variable(ds.p_cont)
        if self.lam.shape != (ds.p_cat,):
            raise SchemaError(
                f"lambda vector has length {self.lam.shape[0]}, expected {ds.p_cat}"
            )
        for lam_j, var in zip(self.lam, ds.categorical_vars):
            hi = (var.n_levels - 1) / var.n_levels
            if not 0.0 <= lam_j <= hi:
                raise ValueError(
                    f"lambda={lam_j!r} outside [0, {hi!r}] for variable {var.name!r}"
                )


@dataclass(frozen=True)
class ConditionalDensity:
    """Row-stochastic n x n matrix p(y | x) plus the marginal p(y).

    Row i conditions on observation i; column j is the density at the
    location of observation j (the support of Y is the observed points).
    """

    matrix: np.ndarray
    marginal_y: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(np.asarray(self.matrix, dtype=float))
        py = np.ascontiguousarray(np.asarray(self.marginal_y, dtype=float))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if py.shape != (m.shape[0],):
            raise ValueError("marginal length must match matrix dimension")
        m.flags.writeable = False
        py.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "marginal_y", py)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _factor_matrices(ds: MixedDataset, bw: Bandwidths):
    """Yield the n x n kernel-factor matrix of each variable, in schema order
    (continuous first, then categorical)."""
    s = bw.s_per_variable(ds.p_cont)
    for c in range(ds.p_cont):
        col = ds.continuous[:, c]
        yield gaussian_kernel(col[:, None] - col[None, :], s[c])
    for d in range(ds.p_cat):
        col = ds.categorical[:, d]
        yield aitchison_aitken(
            col[:, None] == col[None, :], bw.lam[d], ds.categorical_vars[d].n_levels
        )


def kernel_matrix(ds: MixedDataset, bw: Bandwidths) -> np.ndarray:
    """Unnormalized symmetric matrix of pairwise product-kernel values."""
    bw.validate_for(ds)
    out = np.ones((ds.n, ds.n))
    for factor in _factor_matrices(ds, bw):
        out *= factor
    return out


def product_kernel(ds: MixedDataset, i: int, j: int, bw: Bandwidths) -> float:
    """Product of per-variable kernel factors between observations i and j."""
    bw.validate_for(ds)
    s = bw.s_per_variable(ds.p_cont)
    value = 1.0
    for c in range(ds.p_cont):
        value *= gaussian_kernel(ds.continuous[i, c] - ds.continuous[j, c], s[c])
    for d in range(ds.p_cat):
        value *= aitchison_aitken(
            ds.categorical[i, d] == ds.categorical[j, d],
            bw.lam[d],
            ds.categorical_vars[d].n_levels,
        )
    return float(value)


def estimate_conditional(
    ds: MixedDataset, bw: Bandwidths, max_n: int = DEFAULT_MAX_N
) -> ConditionalDensity:
    """Estimate p(y | x) over the observed points.

    Row i is the vector of product-kernel values against every observation
    (self term included) normalized to sum 1; the marginal p(y) is the
    weight-averaged mixture of the rows.

    The result takes O(n^2) memory; ``max_n`` (default 10,000) caps n and
    raising it is an explicit opt-in.  A row summing to zero signals
    degenerate smoothing (conceivable only through underflow, or with
    all-zero lambda on disconnected categorical support).
    """
    if ds.n > max_n:
        raise SizeCapError(
            f"n={ds.n} exceeds the density matrix cap ({max_n}); "
            "subsample or raise max_n explicitly"
        )
    kernel = kernel_matrix(ds, bw)
    row_sums = kernel.sum(axis=1)
    dead = np.flatnonzero(row_sums == 0)
    if dead.size:
        raise DegenerateSmoothingError(
            f"kernel rows {dead[:10].tolist()} sum to zero; increase bandwidths"
        )
    matrix = kernel / row_sums[:, None]
    marginal = ds.weights @ matrix
    return ConditionalDensity(matrix=matrix, marginal_y=marginal)
