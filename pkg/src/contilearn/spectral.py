"""Symmetric eigendecomposition and thresholded principal-component selection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensemble import SolutionDistribution
from .errors import NumericalError

_SYM_TOL = 1e-10


def eig_sym(A: np.ndarray):
    """Eigenvalues (descending) and orthonormal eigenvector rows of a symmetric matrix.

    Each eigenvector's sign is fixed so that its largest-magnitude entry is
    positive, which makes persisted decompositions reproducible.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if float(np.max(np.abs(A - A.T), initial=0.0)) > _SYM_TOL:
        raise ValueError("matrix is not symmetric")
    try:
        evals, evecs = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("spectral", f"eigendecomposition failed: {exc}") from None
    evals = evals[::-1]
    rows = evecs[:, ::-1].T.copy()
    for row in rows:
        if row[np.argmax(np.abs(row))] < 0:
            np.negative(row, out=row)
    return evals, rows


@dataclass(frozen=True)
class PrincipalComponents:
    """Weighted-mean direction plus the selected high-variance eigenvectors."""

    v0: np.ndarray
    u: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self) -> None:
        v0 = np.asarray(self.v0, dtype=float)
        u = np.asarray(self.u, dtype=float)
        eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        if v0.ndim != 1 or u.ndim != 2 or u.shape[1] != v0.shape[0]:
            raise ValueError("component rows must match the mean vector dimension")
        if eigenvalues.shape != (u.shape[0],):
            raise ValueError("one eigenvalue per selected component required")
        object.__setattr__(self, "v0", v0)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "eigenvalues", eigenvalues)

    @property
    def k(self) -> int:
        return self.u.shape[0]

    @property
    def m(self) -> int:
        return self.v0.shape[0]


def select_components(
    dist: SolutionDistribution, rel_threshold: float, k_max: int
) -> PrincipalComponents:
    """Keep eigenvectors whose eigenvalue is at least ``rel_threshold`` times the top one.

    At most ``k_max`` components are kept, at least one when the spectrum is
    positive. A (numerically) zero covariance selects nothing: k = 0.
    """
    if not 0.0 < rel_threshold <= 1.0:
        raise ValueError("rel_threshold must lie in (0, 1]")
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    evals, rows = eig_sym(dist.cov)
    top = float(evals[0]) if evals.size else 0.0
    if top <= 0.0:
        k = 0
    else:
        k = min(int(np.count_nonzero(evals >= rel_threshold * top)), k_max)
    return PrincipalComponents(dist.mean, rows[:k], evals[:k])
