"""Structure functions, feasible sets and Euclidean projections.

A feasible set is the sublevel set {x : f(x) <= eta} of a structure function
f, which is one of the l0 count, the l1 norm or the l2 norm. For l0 the
radius eta is an integer sparsity budget and f is scale-invariant, so the
operations that rely on absolute homogeneity (Minkowski functional, radius
rescaling) reject the l0 kind.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateSignalError,
    InvalidBudgetError,
    InvalidRadiusError,
    UnsupportedKindError,
    ValidationError,
)
from .validation import as_signal

L0 = "l0"
L1 = "l1"
L2 = "l2"
KINDS = (L0, L1, L2)

#: kinds satisfying f(a x) = |a| f(x)
HOMOGENEOUS_KINDS = (L1, L2)

MEMBERSHIP_ATOL = 1e-12


def structure_value(kind: str, x) -> float:
    """Evaluate the structure function of the given kind at x.

    The l0 count uses an exact zero test: ground-truth signals are built with
    exact zeros and solver outputs are reported through hard thresholding.
    """
    x = as_signal(x)
    if kind == L0:
        return float(np.count_nonzero(x))
    if kind == L1:
        return float(np.sum(np.abs(x)))
    if kind == L2:
        return float(np.linalg.norm(x))
    raise UnsupportedKindError("unknown structure function kind %r" % (kind,))


def project_l1_ball(x, eta: float) -> np.ndarray:
    """Euclidean projection onto the l1 ball of radius eta.

    Sort-based soft threshold at the KKT level theta, O(n log n).
    """
    x = as_signal(x)
    if eta <= 0:
        raise InvalidRadiusError("l1 radius must be positive, got %r" % (eta,))
    if np.sum(np.abs(x)) <= eta:
        return x.copy()
    theta = _l1_threshold(np.abs(x), eta)
    return np.sign(x) * np.maximum(np.abs(x) - theta, 0.0)


def _l1_threshold(mags: np.ndarray, eta: float) -> float:
    u = np.sort(mags)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, u.size + 1)
    rho = np.nonzero(u * k > css - eta)[0][-1]
    return (css[rho] - eta) / (rho + 1.0)


def project_l1_ball_rows(X: np.ndarray, eta: float) -> np.ndarray:
    """Row-wise l1-ball projection (vectorized form used by Monte Carlo)."""
    if eta <= 0:
        raise InvalidRadiusError("l1 radius must be positive, got %r" % (eta,))
    X = np.asarray(X, dtype=float)
    mags = np.abs(X)
    norms = mags.sum(axis=1)
    out = X.copy()
    over = norms > eta
    if not np.any(over):
        return out
    sub = mags[over]
    u = np.sort(sub, axis=1)[:, ::-1]
    css = np.cumsum(u, axis=1)
    k = np.arange(1, u.shape[1] + 1)
    cond = u * k > css - eta
    rho = cond.shape[1] - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = (css[np.arange(sub.shape[0]), rho] - eta) / (rho + 1.0)
    out[over] = np.sign(X[over]) * np.maximum(sub - theta[:, None], 0.0)
    return out


def project_l2_ball(x, eta: float) -> np.ndarray:
    """Euclidean projection onto the l2 ball of radius eta."""
    x = as_signal(x)
    if eta <= 0:
        raise InvalidRadiusError("l2 radius must be positive, got %r" % (eta,))
    nrm = np.linalg.norm(x)
    if nrm <= eta:
        return x.copy()
    return (eta / nrm) * x


def hard_threshold(x, s: int) -> np.ndarray:
    """Keep the s entries of largest magnitude, zero the rest.

    Magnitude ties break toward the lowest index, which makes the (possibly
    non-unique) l0 projection deterministic across runs.
    """
    x = as_signal(x)
    s = int(s)
    if s < 0 or s > x.size:
        raise InvalidBudgetError(
            "sparsity budget %d outside [0, %d]" % (s, x.size)
        )
    if s == x.size:
        return x.copy()
    out = np.zeros_like(x)
    if s == 0:
        return out
    # stable sort on (-|x|, index) keeps the lowest index among ties
    order = np.argsort(-np.abs(x), kind="stable")[:s]
    out[order] = x[order]
    return out


@dataclass(frozen=True)
class FeasibleSet:
    """Sublevel set {x : f(x) <= eta} of a structure function."""

    kind: str
    eta: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedKindError("unknown kind %r" % (self.kind,))
        if self.eta < 0:
            raise InvalidRadiusError("radius must be nonnegative")
        if self.kind == L0 and self.eta != int(self.eta):
            raise InvalidBudgetError("l0 budget must be an integer")

    @property
    def homogeneous(self) -> bool:
        return self.kind in HOMOGENEOUS_KINDS

    def value(self, x) -> float:
        return structure_value(self.kind, x)

    def contains(self, x) -> bool:
        return self.value(x) <= self.eta + MEMBERSHIP_ATOL

    def project(self, x) -> np.ndarray:
        """Dispatch to the kind-specific Euclidean projection.

        For l0 the returned minimizer is one admissible choice (it need not
        be unique); ties go to the lowest index.
        """
        if self.kind == L0:
            return hard_threshold(x, int(self.eta))
        if self.kind == L1:
            return project_l1_ball(x, self.eta)
        return project_l2_ball(x, self.eta)

    def minkowski_functional(self, x) -> float:
        """inf{lambda > 0 : x/lambda in K} = f(x)/eta for a norm-ball K."""
        if self.kind == L0:
            raise UnsupportedKindError(
                "Minkowski functional degenerates for the scale-invariant l0"
            )
        if self.eta <= 0:
            raise InvalidRadiusError("radius must be positive")
        return structure_value(self.kind, x) / self.eta

    def rescale_to_radius(self, x) -> np.ndarray:
        """Return (eta/f(x)) x, which lands exactly on the boundary f = eta."""
        if self.kind == L0:
            raise UnsupportedKindError(
                "radius rescaling requires an absolutely homogeneous f"
            )
        x = as_signal(x)
        fx = structure_value(self.kind, x)
        if fx == 0.0:
            raise DegenerateSignalError("cannot rescale a signal with f(x) = 0")
        return (self.eta / fx) * x


def project(K: FeasibleSet, x) -> np.ndarray:
    if not isinstance(K, FeasibleSet):
        raise ValidationError("expected a FeasibleSet")
    return K.project(x)
