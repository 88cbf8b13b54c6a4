"""Dense assembly of the difference operators, for oracles and tiny solves.

Everything here materialises (n^2, n^2) matrices and is deliberately written
with explicit loops so it shares no code path with the vectorised operators
in grid.py.  Assembly is gated to n <= 32; beyond that the matrices stop
being a sensible debugging tool.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .grid import WeightField

MAX_DENSE_N = 32


def _check_gate(n: int) -> None:
    if n > MAX_DENSE_N:
        raise ConfigError(f"dense assembly is limited to n <= {MAX_DENSE_N}, got {n}")


def grad_matrices(w: WeightField):
    """Dense matrices of the weighted forward differences, row-major pixels."""
    n = w.n
    _check_gate(n)
    nn = n * n
    gx = np.zeros((nn, nn))
    gy = np.zeros((nn, nn))
    for i in range(n):
        for j in range(n):
            k = i * n + j
            if j < n - 1:
                gx[k, k + 1] += w.wx[i, j]
                gx[k, k] -= w.wx[i, j]
            if i < n - 1:
                gy[k, k + n] += w.wy[i, j]
                gy[k, k] -= w.wy[i, j]
    return gx, gy


def laplacian_matrix(w: WeightField) -> np.ndarray:
    """Dense weighted Laplacian -(Gx^T Gx + Gy^T Gy)."""
    gx, gy = grad_matrices(w)
    return -(gx.T @ gx + gy.T @ gy)


def system_matrix(w: WeightField, beta: float, theta: float) -> np.ndarray:
    """Dense backward-step system I - beta*theta*Laplacian."""
    lap = laplacian_matrix(w)
    return np.eye(lap.shape[0]) - beta * theta * lap
