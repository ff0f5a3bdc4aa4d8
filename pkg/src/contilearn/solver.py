"""Damped Newton ascent for the regularized logistic objective.

With prior precision r > 0 the objective is strictly concave and the negated
Hessian is positive definite, so each step factors -H with a Cholesky
decomposition and backtracks until the Armijo condition holds. Accepted
steps never decrease the objective, and the maximizer is unique.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .model import Prior, gradient, hessian, log_likelihood

_MIN_STEP = 1e-20


@dataclass(frozen=True)
class SolverConfig:
    grad_tol: float = 1e-8
    max_iters: int = 100
    backtrack: float = 0.5
    armijo: float = 1e-4

    def __post_init__(self) -> None:
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not 0.0 < self.backtrack < 1.0:
            raise ValueError("backtrack factor must lie in (0, 1)")
        if not 0.0 < self.armijo < 0.5:
            raise ValueError("armijo constant must lie in (0, 0.5)")


@dataclass(frozen=True)
class Solution:
    """Result of one maximization: final point, objective, and convergence state.

    ``L_trace`` holds the objective at the start and after every accepted
    step; it is non-decreasing by construction.
    """

    w: np.ndarray
    L_value: float
    grad_norm: float
    iterations: int
    converged: bool
    L_trace: tuple[float, ...]


def _newton_step(A: np.ndarray, g: np.ndarray) -> np.ndarray:
    # A = -H is symmetric positive definite; solve A x = g via its Cholesky factor.
    try:
        c = np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        raise NumericalError("solver", "negated Hessian is not positive definite") from None
    return np.linalg.solve(c.T, np.linalg.solve(c, g))


def maximize(y, F, prior: Prior, config: SolverConfig | None = None, w_init=None) -> Solution:
    """Maximize the regularized objective from ``w_init`` (zero vector by default).

    Returns a converged solution when the gradient norm falls below
    ``grad_tol``; otherwise the best iterate found, flagged unconverged.
    Raises NumericalError if the objective is not finite at the start.
    """
    config = config or SolverConfig()
    y = np.asarray(y, dtype=float)
    F = np.asarray(F, dtype=float)
    m = F.shape[1]
    w = np.zeros(m) if w_init is None else np.array(w_init, dtype=float, copy=True)
    if w.shape != (m,):
        raise ValueError(f"w_init has shape {w.shape}, expected ({m},)")

    L = log_likelihood(w, y, F, prior)
    if not np.isfinite(L):
        raise NumericalError("solver", "objective is not finite at the starting point")
    trace = [L]

    iterations = 0
    while iterations < config.max_iters:
        g = gradient(w, y, F, prior)
        if float(np.linalg.norm(g)) <= config.grad_tol:
            break
        step = _newton_step(-hessian(w, y, F, prior), g)
        slope = float(g @ step)
        t = 1.0
        accepted = False
        while t > _MIN_STEP:
            w_new = w + t * step
            L_new = log_likelihood(w_new, y, F, prior)
            if np.isfinite(L_new) and L_new >= L + config.armijo * t * slope:
                accepted = True
                break
            t *= config.backtrack
        if not accepted:
            # Line search exhausted at numerical precision: keep the best iterate.
            break
        w, L = w_new, L_new
        trace.append(L)
        iterations += 1

    grad_norm = float(np.linalg.norm(gradient(w, y, F, prior)))
    return Solution(
        w=w,
        L_value=L,
        grad_norm=grad_norm,
        iterations=iterations,
        converged=grad_norm <= config.grad_tol,
        L_trace=tuple(trace),
    )
