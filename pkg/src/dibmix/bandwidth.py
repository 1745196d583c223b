"""Clustering-oriented bandwidth selection.

Rather than optimizing density-estimation accuracy (cross-validation), the
bandwidths are chosen to balance how much each variable type moves the
conditional density p(y | x): the categorical lambdas are scaled so that the
mean variance of pairwise categorical kernel values matches the mean variance
of pairwise continuous kernel values, optionally reweighted by the user.
A Silverman-type n^(-1/(4+p)) rate supplies the continuous default.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import MixedDataset
from .errors import SchemaError
from .kernels import Bandwidths, aitchison_aitken, gaussian_kernel

DEFAULT_S_MULTIPLIER = 3.0

_BISECT_ITER = 100
_BALANCE_RTOL = 1e-6


@dataclass(frozen=True)
class BalanceSpec:
    """How to pick bandwidths: categorical-to-continuous weight and s rule.

    ``categorical_weight`` scales the target categorical kernel variance
    relative to the continuous one (1 = equal influence).  ``s_value`` pins
    s directly; otherwise s follows the scaled default rate.
    """

    categorical_weight: float = 1.0
    s_rule: str = "scaled-default"
    s_value: float = None
    s_multiplier: float = DEFAULT_S_MULTIPLIER

    def __post_init__(self):
        if self.categorical_weight <= 0:
            raise ValueError("categorical weight must be positive")
        if self.s_rule not in ("scaled-default", "user-supplied"):
            raise ValueError(f"unknown s rule {self.s_rule!r}")
        if self.s_rule == "user-supplied" and self.s_value is None:
            raise ValueError("user-supplied s rule needs s_value")
        if self.s_value is not None and self.s_value <= 0:
            raise ValueError("s must be positive")


def default_s(ds: MixedDataset, multiplier: float = DEFAULT_S_MULTIPLIER) -> float:
    """Default continuous bandwidth: multiplier * n^(-1/(4 + p_cont)).

    Assumes standardized continuous columns.  The rate follows the usual
    bias-variance scaling; the multiplier (default 3.0) deliberately
    oversmooths relative to density-estimation optima so that p(y | x)
    spreads across points instead of collapsing onto each observation.
    """
    if ds.p_cont < 1:
        raise SchemaError("default_s needs at least one continuous variable")
    if ds.n < 2:
        raise SchemaError("default_s needs at least 2 observations")
    if multiplier <= 0:
        raise ValueError("multiplier must be positive")
    return float(multiplier * ds.n ** (-1.0 / (4 + ds.p_cont)))


def kernel_factor_variance_continuous(ds: MixedDataset, s) -> float:
    """Mean over continuous variables of the variance of pairwise Gaussian
    kernel values, all n^2 ordered pairs (diagonal included)."""
    if ds.p_cont < 1:
        raise SchemaError("no continuous variables")
    s = Bandwidths(s=s).s_per_variable(ds.p_cont)
    variances = np.empty(ds.p_cont)
    for c in range(ds.p_cont):
        col = ds.continuous[:, c]
        values = gaussian_kernel(col[:, None] - col[None, :], s[c])
        variances[c] = values.var()
    return float(variances.mean())


def _match_fractions(ds: MixedDataset) -> np.ndarray:
    """Per categorical variable: fraction of the n^2 ordered pairs that agree."""
    out = np.empty(ds.p_cat)
    for d in range(ds.p_cat):
        col = ds.categorical[:, d]
        counts = np.bincount(col, minlength=ds.categorical_vars[d].n_levels)
        out[d] = (counts.astype(float) ** 2).sum() / ds.n**2
    return out


def kernel_factor_variance_categorical(ds: MixedDataset, lam) -> float:
    """Mean over categorical variables of the variance of pairwise
    Aitchison-Aitken kernel values (same pair convention as the continuous
    counterpart)."""
    if ds.p_cat < 1:
        raise SchemaError("no categorical variables")
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if lam.shape != (ds.p_cat,):
        raise SchemaError(f"lambda vector must have length {ds.p_cat}")
    match = _match_fractions(ds)
    variances = np.empty(ds.p_cat)
    for d, var in enumerate(ds.categorical_vars):
        a = aitchison_aitken(True, lam[d], var.n_levels)
        b = aitchison_aitken(False, lam[d], var.n_levels)
        m = match[d]
        mean = m * a + (1 - m) * b
        variances[d] = m * (a - mean) ** 2 + (1 - m) * (b - mean) ** 2
    return float(variances.mean())


def select_lambda(ds: MixedDataset, s, categorical_weight: float = 1.0) -> np.ndarray:
    """Pick the categorical bandwidth vector by variance matching.

    All lambdas share one scale alpha in [0, 1] via
    lambda_j = alpha * (levels_j - 1) / levels_j.  Alpha is bisected until the
    mean pairwise categorical kernel variance equals
    ``categorical_weight`` x the continuous one.  The variance is continuous
    and strictly decreasing in alpha (zero at alpha = 1, the constant kernel),
    so the target is always reachable unless it exceeds the alpha = 0 maximum,
    in which case alpha clamps to 0 with a warning.

    With no continuous variables the matching target is undefined and the
    fallback lambda_j = max(0, (levels_j - 1)/levels_j - 0.2) is returned.
    """
    if ds.p_cat < 1:
        raise SchemaError("select_lambda needs at least one categorical variable")
    if categorical_weight <= 0:
        raise ValueError("categorical weight must be positive")
    upper = np.array([(l - 1) / l for l in ds.n_levels])
    if ds.p_cont == 0:
        return np.maximum(0.0, upper - 0.2)

    def variance_at(alpha: float) -> float:
        return kernel_factor_variance_categorical(ds, alpha * upper)

    max_var = variance_at(0.0)
    if max_var == 0.0:
        warnings.warn(
            "all categorical columns are constant; kernel variance is zero for "
            "every lambda, returning mid-range values",
            stacklevel=2,
        )
        return 0.5 * upper

    target = categorical_weight * kernel_factor_variance_continuous(ds, s)
    if target == 0.0:
        return upper.copy()
    if target > max_var:
        warnings.warn(
            f"balance target {target:.3e} exceeds the maximum categorical kernel "
            f"variance {max_var:.3e}; clamping lambda to 0",
            stacklevel=2,
        )
        return np.zeros(ds.p_cat)

    lo, hi = 0.0, 1.0  # variance_at(lo) >= target >= variance_at(hi)
    for _ in range(_BISECT_ITER):
        mid = 0.5 * (lo + hi)
        if variance_at(mid) >= target:
            lo = mid
        else:
            hi = mid
    alpha = 0.5 * (lo + hi)
    return alpha * upper


def choose_bandwidths(ds: MixedDataset, spec: BalanceSpec = BalanceSpec()) -> Bandwidths:
    """Resolve a BalanceSpec into concrete bandwidths for a dataset."""
    if ds.p_cont >= 1:
        s = spec.s_value if spec.s_value is not None else default_s(ds, spec.s_multiplier)
    else:
        s = 1.0  # unused without continuous variables
    lam = (
        select_lambda(ds, s, spec.categorical_weight) if ds.p_cat >= 1 else np.empty(0)
    )
    return Bandwidths(s=float(s), lam=lam)
