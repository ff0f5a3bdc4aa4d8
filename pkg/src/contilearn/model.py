"""Regularized logistic model: probabilities, objective, gradient, Hessian.

The score is the dot product of a parameter vector with a feature vector
whose slot 0 is a constant bias feature. The prior is an isotropic Gaussian
with precision r, written with its normalization constant so that objective
values remain comparable across different r. All exponentials go through
softplus / the two-branch sigmoid, so nothing here overflows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_LOG_2PI = float(np.log(2.0 * np.pi))
_TINY = float(np.finfo(float).tiny)
_ALMOST_ONE = float(np.nextafter(1.0, 0.0))


@dataclass(frozen=True)
class Prior:
    """Isotropic Gaussian prior over parameters with precision r > 0."""

    r: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.r) and self.r > 0):
            raise ValueError(f"prior precision must be a positive finite real, got {self.r}")


def sigmoid(z):
    """exp(z) / (1 + exp(z)) evaluated without overflow for any real z."""
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return float(out[0]) if scalar else out


def softplus(z):
    """log(1 + exp(z)) without overflow."""
    z = np.asarray(z, dtype=float)
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def _check_dims(w: np.ndarray, F: np.ndarray) -> None:
    if F.shape[-1] != w.shape[0]:
        raise ValueError(
            f"feature dimension {F.shape[-1]} does not match parameter dimension {w.shape[0]}"
        )


def predict_prob(w, F):
    """P(y=1 | features) for one feature vector or a matrix of them.

    The result is clamped into the open interval (0, 1): saturated scores
    return the smallest positive normal double (or its complement), which
    keeps downstream logs finite.
    """
    w = np.asarray(w, dtype=float)
    F = np.asarray(F, dtype=float)
    _check_dims(w, F)
    p = sigmoid(F @ w)
    if isinstance(p, float):
        return min(max(p, _TINY), _ALMOST_ONE)
    return np.clip(p, _TINY, _ALMOST_ONE)


def log_prior(w, prior: Prior) -> float:
    """Log-density of the isotropic Gaussian prior, normalization included."""
    w = np.asarray(w, dtype=float)
    m = w.shape[0]
    return float(0.5 * m * (np.log(prior.r) - _LOG_2PI) - 0.5 * prior.r * float(w @ w))


def log_likelihood(w, y, F, prior: Prior | None = None) -> float:
    """Training objective: label log-probabilities plus (optionally) the log prior.

    With ``prior=None`` only the data term is returned.
    """
    w = np.asarray(w, dtype=float)
    y = np.asarray(y, dtype=float)
    F = np.asarray(F, dtype=float)
    _check_dims(w, F)
    if F.shape[0] != y.shape[0]:
        raise ValueError("label and feature sample counts differ")
    z = F @ w
    value = float(y @ z - np.sum(softplus(z)))
    if prior is not None:
        value += log_prior(w, prior)
    return value


def gradient(w, y, F, prior: Prior | None = None) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    y = np.asarray(y, dtype=float)
    F = np.asarray(F, dtype=float)
    _check_dims(w, F)
    p = sigmoid(F @ w)
    g = F.T @ (y - p)
    if prior is not None:
        g = g - prior.r * w
    return g


def hessian(w, y, F, prior: Prior | None = None) -> np.ndarray:
    """Second derivative matrix; symmetric, and negative definite whenever r > 0."""
    w = np.asarray(w, dtype=float)
    y = np.asarray(y, dtype=float)
    F = np.asarray(F, dtype=float)
    _check_dims(w, F)
    p = sigmoid(F @ w)
    s = p * (1.0 - p)
    H = -(F * s[:, None]).T @ F
    if prior is not None:
        H = H - prior.r * np.eye(w.shape[0])
    return 0.5 * (H + H.T)
