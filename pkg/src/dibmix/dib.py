"""Deterministic information bottleneck clustering.

Each observation x carries an estimated conditional density p(y | x) over
the observed locations.  A hard encoder t(x) is sought that minimizes

    H(T) - beta * I(T, Y),

trading compression (few, dense clusters) against relevance (cluster labels
that pin down location).  The solver alternates, from a random hard
assignment, between scoring

    score(x, t) = log q(t) - beta * KL(p(. | x) || q(. | t))

and reassigning every x to its argmax cluster, then refreshing the cluster
masses q(t) and the cluster-conditional decoder q(y | t).  Updates are
synchronous: every score in iteration m uses the iteration m-1 quantities.
Empty clusters score -inf and therefore stay empty, which is what lets the
method prune clusters (reported as ``effective_k``).

Reference: Strouse, DJ and Schwab, D.J. (2017). The deterministic
information bottleneck. Neural Computation 29.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import MixedDataset
from .errors import DegenerateSmoothingError
from .infotheory import entropy, mutual_information
from .kernels import Bandwidths, ConditionalDensity, DEFAULT_MAX_N, estimate_conditional
from .seeding import STREAM_RESTART, derive_seed

DEFAULT_RESTARTS = 100
DEFAULT_MAX_ITER = 100

_TRACE_RISE_TOL = 1e-12


@dataclass(frozen=True)
class Encoder:
    """Hard cluster assignment plus the derived masses and decoder.

    ``assign`` maps observation index to cluster label in {0..k-1};
    ``masses`` is q(t); ``decoder`` is the k x n matrix q(y | t), zero rows
    for empty clusters (their conditional is undefined).  ``decoder`` is
    None until the encoder has been refreshed against a density.
    """

    assign: np.ndarray
    masses: np.ndarray
    decoder: np.ndarray = None

    def __post_init__(self):
        assign = np.ascontiguousarray(np.asarray(self.assign, dtype=np.int64))
        masses = np.ascontiguousarray(np.asarray(self.masses, dtype=float))
        assign.flags.writeable = False
        masses.flags.writeable = False
        object.__setattr__(self, "assign", assign)
        object.__setattr__(self, "masses", masses)
        if self.decoder is not None:
            dec = np.ascontiguousarray(np.asarray(self.decoder, dtype=float))
            dec.flags.writeable = False
            object.__setattr__(self, "decoder", dec)

    @property
    def k(self) -> int:
        return self.masses.shape[0]

    @property
    def effective_k(self) -> int:
        return int(np.count_nonzero(self.masses > 0))

    @classmethod
    def from_assignment(cls, assign, k: int, density: ConditionalDensity, weights) -> "Encoder":
        assign = np.asarray(assign, dtype=np.int64)
        weights = np.asarray(weights, dtype=float)
        masses, decoder = _masses_and_decoder(assign, k, density.matrix, weights)
        return cls(assign=assign, masses=masses, decoder=decoder)


def _masses_and_decoder(assign, k, p_matrix, weights):
    """q(t) = sum_x w(x) [t(x)=t];  q(y|t) = sum_x w(x) p(y|x) [t(x)=t] / q(t)."""
    masses = np.bincount(assign, weights=weights, minlength=k)
    decoder = np.zeros((k, p_matrix.shape[0]))
    for t in range(k):
        members = assign == t
        if masses[t] > 0:
            # einsum, not @: fixed summation order keeps results bit-identical
            # whatever BLAS threading is in effect.
            decoder[t] = np.einsum("x,xy->y", weights[members], p_matrix[members])
            decoder[t] /= masses[t]
    return masses, decoder


def init_random(n: int, k: int, rng_seed: int) -> Encoder:
    """Assign each observation independently and uniformly to one of k
    clusters; masses use uniform weights, decoder is left unset."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(rng_seed)
    assign = rng.integers(0, k, size=n)
    masses = np.bincount(assign, minlength=k) / n
    return Encoder(assign=assign, masses=masses)


def _score_step(masses, decoder, p_matrix, row_neg_entropy, beta, has_zeros):
    """One synchronous scoring pass; returns the new assignment vector.

    score[x, t] = log q(t) - beta * KL(p(.|x) || q(.|t)).  Uses einsum rather
    than BLAS so results are bit-identical regardless of ambient threading.
    """
    with np.errstate(divide="ignore"):
        log_masses = np.log(masses)
        log_decoder = np.where(decoder > 0, np.log(np.where(decoder > 0, decoder, 1.0)), 0.0)
    if beta == 0:
        # Pure compression: the KL term drops out entirely (avoids 0 * inf).
        score = np.broadcast_to(log_masses, (p_matrix.shape[0], masses.shape[0])).copy()
    else:
        cross = np.einsum("xy,ty->xt", p_matrix, log_decoder)
        kl = row_neg_entropy[:, None] - cross
        if has_zeros:
            # p(y|x) > 0 meeting q(y|t) = 0 makes the KL infinite for that pair.
            hits = np.einsum(
                "xy,ty->xt", (p_matrix > 0).astype(float), (decoder == 0).astype(float)
            )
            live = masses > 0
            infeasible = (hits > 0) & live[None, :]
            kl[infeasible] = np.inf
        score = log_masses[None, :] - beta * kl
    score[:, masses == 0] = -np.inf
    row_best = score.max(axis=1)
    if np.any(np.isneginf(row_best)):
        raise DegenerateSmoothingError(
            "some observation has no cluster with finite score; categorical "
            "support is disconnected under zero-lambda smoothing"
        )
    return np.argmax(score, axis=1)  # ties resolve to the smallest cluster index


def dib_step(enc: Encoder, density: ConditionalDensity, beta: float, weights) -> Encoder:
    """One synchronous update of the encoder against a fixed density."""
    weights = np.asarray(weights, dtype=float)
    if enc.assign.shape[0] != density.n:
        raise ValueError("encoder and density dimensions differ")
    if enc.decoder is None:
        enc = Encoder.from_assignment(enc.assign, enc.k, density, weights)
    p = density.matrix
    row_neg_entropy = _row_neg_entropy(p)
    assign = _score_step(
        enc.masses, enc.decoder, p, row_neg_entropy, beta, has_zeros=bool(np.any(p == 0))
    )
    return Encoder.from_assignment(assign, enc.k, density, weights)


def _row_neg_entropy(p_matrix):
    safe = np.where(p_matrix > 0, p_matrix, 1.0)
    return np.einsum("xy,xy->x", p_matrix, np.log(safe))


def objective(enc: Encoder, density: ConditionalDensity, beta: float):
    """Return (H(T) - beta * I(T, Y), H(T), I(T, Y)) for an encoder."""
    if enc.decoder is None:
        raise ValueError("encoder has no decoder; refresh it against the density first")
    h = entropy(enc.masses)
    joint = enc.masses[:, None] * enc.decoder
    i = mutual_information(joint)
    return h - beta * i, h, i


@dataclass(frozen=True)
class RestartSummary:
    restart_index: int
    seed: int
    objective: float
    compression: float
    relevance: float
    iterations: int
    effective_k: int
    converged: bool
    cycle_detected: bool


@dataclass(frozen=True)
class DibResult:
    """Best-of-restarts solution with its trace and per-restart summaries."""

    encoder: Encoder
    beta: float
    objective: float
    compression: float
    relevance: float
    iterations: int
    objective_trace: np.ndarray
    effective_k: int
    restart_index: int
    seed: int
    converged: bool
    cycle_detected: bool
    restart_summary: tuple = field(default=(), repr=False)

    @property
    def assign(self) -> np.ndarray:
        return self.encoder.assign

    def to_dict(self) -> dict:
        return {
            "assignment": self.encoder.assign.tolist(),
            "masses": self.encoder.masses.tolist(),
            "beta": self.beta,
            "compression": self.compression,
            "relevance": self.relevance,
            "objective": self.objective,
            "effective_k": self.effective_k,
            "iterations": self.iterations,
            "converged": self.converged,
            "cycle_detected": self.cycle_detected,
            "restart_index": self.restart_index,
            "seed": self.seed,
            "objective_trace": [float(v) for v in self.objective_trace],
            "restart_summary": [
                {
                    "restart": r.restart_index,
                    "seed": r.seed,
                    "objective": r.objective,
                    "iterations": r.iterations,
                    "effective_k": r.effective_k,
                    "converged": r.converged,
                    "cycle_detected": r.cycle_detected,
                }
                for r in self.restart_summary
            ],
        }


def _run_chain(density, weights, k, beta, max_iter, seed, restart_index):
    """Iterate one restart to convergence; returns a DibResult for the chain.

    Convergence is detected on the assignment vector.  The objective trace is
    recorded after every iteration; a strict increase aborts the chain (a
    cycle) and the best encoder seen so far is kept.
    """
    p = density.matrix
    has_zeros = bool(np.any(p == 0))
    row_neg_entropy = _row_neg_entropy(p)
    enc = init_random(p.shape[0], k, seed)
    enc = Encoder.from_assignment(enc.assign, k, density, weights)
    trace = []
    best = None
    converged = False
    cycle = False
    iterations = 0
    prev_obj = np.inf
    for _ in range(max_iter):
        new_assign = _score_step(enc.masses, enc.decoder, p, row_neg_entropy, beta, has_zeros)
        unchanged = bool(np.array_equal(new_assign, enc.assign))
        enc = Encoder.from_assignment(new_assign, k, density, weights)
        obj, h, i = objective(enc, density, beta)
        iterations += 1
        trace.append(obj)
        if best is None or obj < best[0]:
            best = (obj, h, i, enc, iterations)
        if unchanged:
            converged = True
            break
        if obj > prev_obj + _TRACE_RISE_TOL:
            cycle = True
            break
        prev_obj = obj
    obj, h, i, enc, _ = best
    return DibResult(
        encoder=enc,
        beta=beta,
        objective=obj,
        compression=h,
        relevance=i,
        iterations=iterations,
        objective_trace=np.array(trace),
        effective_k=enc.effective_k,
        restart_index=restart_index,
        seed=seed,
        converged=converged,
        cycle_detected=cycle,
    )


def dib_fit_density(
    density: ConditionalDensity,
    weights,
    k: int,
    beta: float,
    restarts: int = DEFAULT_RESTARTS,
    max_iter: int = DEFAULT_MAX_ITER,
    rng_seed: int = 0,
    threads: int = 1,
) -> DibResult:
    """Run independent restarts on a precomputed density; keep the best.

    Restart r draws its seed as ``derive_seed(rng_seed, STREAM_RESTART, r)``
    and chains are reduced by (objective, restart index), so the result is
    identical for any thread count.
    """
    if restarts < 1 or max_iter < 1:
        raise ValueError("restarts and max_iter must be >= 1")
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    n = density.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    weights = np.asarray(weights, dtype=float)
    seeds = [derive_seed(rng_seed, STREAM_RESTART, r) for r in range(restarts)]

    def run(r):
        return _run_chain(density, weights, k, beta, max_iter, seeds[r], r)

    if threads > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(r) for r in range(restarts)]
    best = min(results, key=lambda r: (r.objective, r.restart_index))
    summary = tuple(
        RestartSummary(
            restart_index=r.restart_index,
            seed=r.seed,
            objective=r.objective,
            compression=r.compression,
            relevance=r.relevance,
            iterations=r.iterations,
            effective_k=r.effective_k,
            converged=r.converged,
            cycle_detected=r.cycle_detected,
        )
        for r in results
    )
    return DibResult(
        encoder=best.encoder,
        beta=best.beta,
        objective=best.objective,
        compression=best.compression,
        relevance=best.relevance,
        iterations=best.iterations,
        objective_trace=best.objective_trace,
        effective_k=best.effective_k,
        restart_index=best.restart_index,
        seed=best.seed,
        converged=best.converged,
        cycle_detected=best.cycle_detected,
        restart_summary=summary,
    )


def dib_fit(
    ds: MixedDataset,
    k: int,
    beta: float,
    bw: Bandwidths,
    restarts: int = DEFAULT_RESTARTS,
    max_iter: int = DEFAULT_MAX_ITER,
    rng_seed: int = 0,
    threads: int = 1,
    max_n: int = DEFAULT_MAX_N,
) -> DibResult:
    """Estimate the conditional density for ``ds`` and fit the encoder."""
    density = estimate_conditional(ds, bw, max_n=max_n)
    return dib_fit_density(
        density, ds.weights, k, beta, restarts=restarts, max_iter=max_iter,
        rng_seed=rng_seed, threads=threads,
    )


@dataclass(frozen=True)
class BetaSweepRow:
    beta: float
    compression: float
    relevance: float
    objective: float
    effective_k: int
    iterations: int


@dataclass(frozen=True)
class BetaSweepResult:
    """Relevance-compression curve over a beta grid.

    ``suggested_beta`` marks the largest-magnitude second difference of
    I(T, Y) along the grid (a curvature hint, not a decision); None when the
    grid has fewer than three points.
    """

    rows: tuple
    suggested_beta: float = None

    def as_columns(self) -> dict:
        return {
            "beta": [r.beta for r in self.rows],
            "compression": [r.compression for r in self.rows],
            "relevance": [r.relevance for r in self.rows],
            "objective": [r.objective for r in self.rows],
            "effective_k": [r.effective_k for r in self.rows],
            "iterations": [r.iterations for r in self.rows],
        }


def beta_sweep(
    ds: MixedDataset,
    k: int,
    bw: Bandwidths,
    betas,
    restarts: int = DEFAULT_RESTARTS,
    max_iter: int = DEFAULT_MAX_ITER,
    rng_seed: int = 0,
    threads: int = 1,
    max_n: int = DEFAULT_MAX_N,
) -> BetaSweepResult:
    """Fit once per beta (same seed, so initializations are shared) and
    tabulate H(T), I(T, Y) and the effective cluster count."""
    betas = [float(b) for b in betas]
    if not betas:
        raise ValueError("betas must be non-empty")
    if any(b < 0 for b in betas):
        raise ValueError("betas must be nonnegative")
    density = estimate_conditional(ds, bw, max_n=max_n)
    rows = []
    for beta in betas:
        res = dib_fit_density(
            density, ds.weights, k, beta, restarts=restarts, max_iter=max_iter,
            rng_seed=rng_seed, threads=threads,
        )
        rows.append(
            BetaSweepRow(
                beta=beta,
                compression=res.compression,
                relevance=res.relevance,
                objective=res.objective,
                effective_k=res.effective_k,
                iterations=res.iterations,
            )
        )
    suggested = None
    if len(rows) >= 3:
        b = np.array([r.beta for r in rows])
        i_ty = np.array([r.relevance for r in rows])
        curv = np.abs(_second_divided_difference(b, i_ty))
        suggested = float(b[1:-1][int(np.argmax(curv))])
    return BetaSweepResult(rows=tuple(rows), suggested_beta=suggested)


def _second_divided_difference(x, y):
    """2 * [y_{i-1}, y_i, y_{i+1}] divided differences (uneven spacing ok)."""
    left = (y[1:-1] - y[:-2]) / (x[1:-1] - x[:-2])
    right = (y[2:] - y[1:-1]) / (x[2:] - x[1:-1])
    return 2.0 * (right - left) / (x[2:] - x[:-2])
