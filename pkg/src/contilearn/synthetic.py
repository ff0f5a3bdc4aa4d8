"""Deterministic desk-scale benchmark datasets.

Both problems need a nonlinear boundary, which makes them useful probes for
the expansion cycle: the parity dataset is the classic case a linear model
cannot beat chance on, and the disk dataset has an exactly quadratic
boundary.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def xor_dataset(n_per_cell: int = 25, noise_rate: float = 0.05, seed: int = 7):
    """The four parity cells, each repeated, with a fixed share of flipped labels.

    Exactly round(noise_rate * n) labels are flipped, so a perfect parity
    classifier scores exactly 1 - noise_rate on the training rows.
    """
    cells = np.array([(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)])
    X = np.repeat(cells, n_per_cell, axis=0)
    y = np.repeat(np.array([0.0, 1.0, 1.0, 0.0]), n_per_cell)
    n = len(y)
    n_flip = int(round(noise_rate * n))
    if n_flip:
        rng = np.random.default_rng(seed)
        flip = rng.choice(n, size=n_flip, replace=False)
        y[flip] = 1.0 - y[flip]
    return X, y


def circle_dataset(n: int = 200, seed: int = 11, half_width: float = 1.5):
    """Uniform points on a square, labelled by membership in the unit disk."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(-half_width, half_width, size=(n, 2))
    y = (np.sum(X * X, axis=1) <= 1.0).astype(float)
    return X, y


def write_csv(path, X, y=None) -> None:
    """Write rows of inputs (plus an optional trailing label column) as plain CSV."""
    X = np.asarray(X, dtype=float)
    lines = []
    for i in range(X.shape[0]):
        fields = [repr(float(v)) for v in X[i]]
        if y is not None:
            fields.append(repr(float(y[i])))
        lines.append(",".join(fields))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
