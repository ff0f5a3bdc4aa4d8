"""Bootstrap replicate solves and the likelihood-weighted solution distribution.

Each replicate resamples the training rows with replacement (multiset size
equals the training size) and is solved on its own subsample. Replicates are
weighted by the softmax of their full-data objective values, computed in the
log domain, and the weighted mean/covariance of the solution cloud define
the solution distribution handed to the spectral step.

Replicate solves are independent; the env var CONTILEARN_THREADS caps the
worker count (0 or unset means auto). Results are reduced in replicate index
order so the output is identical for any thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .model import Prior, log_likelihood
from .solver import SolverConfig, maximize

_SEED_LIMIT = 1 << 64


@dataclass(frozen=True)
class BootstrapPlan:
    """Resampling plan: ``n_replicates`` draws of t_max indices with replacement.

    Replicate s draws from its own generator seeded with ``seed ^ s``, so the
    index streams do not depend on execution order.
    """

    n_replicates: int
    seed: int

    def __post_init__(self) -> None:
        if self.n_replicates < 2:
            raise ValueError("a bootstrap plan needs at least 2 replicates")
        if not 0 <= self.seed < _SEED_LIMIT:
            raise ValueError("seed must be an unsigned 64-bit integer")


def sample_plans(plan: BootstrapPlan, t_max: int) -> list[np.ndarray]:
    """Index multisets for every replicate, deterministic given the plan seed."""
    if t_max < 2:
        raise ValueError("t_max must be at least 2")
    return [
        np.random.default_rng(plan.seed ^ s).integers(0, t_max, size=t_max, dtype=np.int64)
        for s in range(plan.n_replicates)
    ]


def weights_from_loglik(L) -> np.ndarray:
    """Softmax of log-likelihood values, shifted by the maximum so nothing overflows."""
    L = np.asarray(L, dtype=float)
    shifted = np.exp(L - np.max(L))
    return shifted / np.sum(shifted)


def worker_count() -> int:
    """Worker cap from CONTILEARN_THREADS; 0 or unset selects the CPU count."""
    raw = os.environ.get("CONTILEARN_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"CONTILEARN_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError("CONTILEARN_THREADS must be non-negative")
    return n if n > 0 else (os.cpu_count() or 1)


def _map_ordered(fn, items):
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class ReplicateSolution:
    """One replicate's solution with its subsample and full-data objectives."""

    index: int
    w: np.ndarray
    L_full: float
    L_subset: float
    converged: bool


@dataclass(frozen=True)
class SolutionSet:
    solutions: tuple[ReplicateSolution, ...]
    weights: np.ndarray
    n_failed: int = 0

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=float)
        if weights.shape != (len(self.solutions),):
            raise ValueError("one weight per solution required")
        if np.any(weights < 0) or abs(float(weights.sum()) - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1")
        object.__setattr__(self, "weights", weights)


def solve_replicates(
    y,
    F,
    plans,
    prior: Prior,
    config: SolverConfig | None = None,
    w_init=None,
) -> SolutionSet:
    """Solve every replicate on its subsample and weight by full-data objective.

    Replicates whose solve raises are dropped; fewer than two survivors is an
    error. Weights use the full-data objective because subsample objectives
    are not comparable across replicates.
    """
    if len(plans) == 0:
        raise ValueError("plans must be nonempty")
    y = np.asarray(y, dtype=float)
    F = np.asarray(F, dtype=float)

    def solve_one(arg):
        s, idx = arg
        try:
            sol = maximize(y[idx], F[idx], prior, config, w_init)
        except NumericalError:
            return None
        return ReplicateSolution(
            index=s,
            w=sol.w,
            L_full=log_likelihood(sol.w, y, F, prior),
            L_subset=sol.L_value,
            converged=sol.converged,
        )

    results = _map_ordered(solve_one, enumerate(plans))
    kept = [r for r in results if r is not None]
    if len(kept) < 2:
        raise NumericalError(
            "ensemble", f"only {len(kept)} of {len(plans)} replicate solves succeeded"
        )
    weights = weights_from_loglik([r.L_full for r in kept])
    return SolutionSet(tuple(kept), weights, n_failed=len(results) - len(kept))


@dataclass(frozen=True)
class SolutionDistribution:
    """Weighted mean and covariance of the replicate solution cloud."""

    mean: np.ndarray
    cov: np.ndarray


def fit_distribution(solset: SolutionSet) -> SolutionDistribution:
    """Weighted mean and outer-product covariance; the covariance is symmetrized."""
    if len(solset.solutions) < 2:
        raise ValueError("need at least 2 solutions to fit a distribution")
    weights = solset.weights
    if float(weights.sum()) <= 0:
        raise ValueError("weights are all zero")
    W = np.stack([sol.w for sol in solset.solutions])
    mean = weights @ W
    dev = W - mean
    cov = (dev * weights[:, None]).T @ dev
    return SolutionDistribution(mean, 0.5 * (cov + cov.T))
