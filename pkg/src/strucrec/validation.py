"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionError, ValidationError


def as_signal(x, name: str = "x") -> np.ndarray:
    """Coerce to a finite 1-d float vector."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise DimensionError("%s must be a nonempty 1-d vector" % name)
    if not np.all(np.isfinite(arr)):
        raise ValidationError("%s contains non-finite entries" % name)
    return arr


def as_matrix(A, name: str = "A") -> np.ndarray:
    """Coerce to a finite 2-d float matrix."""
    arr = np.asarray(A, dtype=float)
    if arr.ndim != 2 or arr.size < 1:
        raise DimensionError("%s must be a nonempty 2-d matrix" % name)
    if not np.all(np.isfinite(arr)):
        raise ValidationError("%s contains non-finite entries" % name)
    return arr


def check_conformable(A: np.ndarray, x: np.ndarray | None = None,
                      y: np.ndarray | None = None) -> None:
    if x is not None and A.shape[1] != x.shape[0]:
        raise DimensionError(
            "matrix has %d columns but vector has %d entries"
            % (A.shape[1], x.shape[0])
        )
    if y is not None and A.shape[0] != y.shape[0]:
        raise DimensionError(
            "matrix has %d rows but measurement vector has %d entries"
            % (A.shape[0], y.shape[0])
        )
