"""Minimal dense linear-algebra utilities."""

from __future__ import annotations

import numpy as np

from .validation import as_matrix

_POWER_ITER_CAP = 500
_POWER_ITER_RTOL = 1e-6


def operator_norm(A) -> float:
    """Largest singular value of a dense matrix.

    Power iteration on A^T A with a deterministic start vector, iteration cap
    500 and relative tolerance 1e-6. An all-zero matrix returns 0.
    """
    A = as_matrix(A)
    if not np.any(A):
        return 0.0
    # start from the row-sum direction; fall back to e_1 if it degenerates
    v = A.sum(axis=0)
    if not np.any(v):
        v = np.zeros(A.shape[1])
        v[0] = 1.0
    v = v / np.linalg.norm(v)
    sigma2 = 0.0
    for _ in range(_POWER_ITER_CAP):
        w = A.T @ (A @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # v landed in the null space; restart from a shifted basis vector
            v = np.roll(v, 1) + 1.0
            v = v / np.linalg.norm(v)
            continue
        new_sigma2 = float(v @ w)
        v = w / nw
        if abs(new_sigma2 - sigma2) <= _POWER_ITER_RTOL * max(new_sigma2, 1e-300):
            sigma2 = new_sigma2
            break
        sigma2 = new_sigma2
    return float(np.sqrt(max(sigma2, 0.0)))
