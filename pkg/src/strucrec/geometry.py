"""Gaussian widths, the phase-transition function and sample-complexity maps.

The phase-transition function phi(t) = sqrt(2) Gamma((t+1)/2) / Gamma(t/2) is
the mean length of a t-dimensional standard Gaussian vector; it satisfies
0.50245 t <= phi(t)^2 <= t for t >= 1 and phi(t)/sqrt(t) is non-decreasing.
Widths of the supported sets are estimated by Monte Carlo: for each Gaussian
draw g the inner problem sup_{z in T} <g, z> is solved (exactly for the
Euclidean ball and sphere, by projected ascent for the l1 cap, and by a
sampled-direction heuristic for descent-cone caps, which is therefore a
lower-bias estimate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .constraints import (
    L0,
    FeasibleSet,
    hard_threshold,
    project_l1_ball_rows,
    structure_value,
)
from .exceptions import (
    DimensionError,
    InsufficientSamplesError,
    ValidationError,
)
from .rng import RngSpec
from .validation import as_signal


def phi(t: float) -> float:
    """Mean length of a t-dimensional standard Gaussian vector.

    Computed via log-gamma for numerical stability at large t.
    """
    if t <= 0:
        raise ValidationError("phi requires t > 0, got %r" % (t,))
    return math.exp(
        0.5 * math.log(2.0) + math.lgamma((t + 1.0) / 2.0) - math.lgamma(t / 2.0)
    )


def phi_ratio_monotone_check(m0: float, m: float) -> bool:
    """Whether phi(m0)/sqrt(m0) <= phi(m)/sqrt(m); holds for all 0 < m0 <= m."""
    if not (0 < m0 <= m):
        raise ValidationError("need 0 < m0 <= m, got (%r, %r)" % (m0, m))
    # tiny epsilon absorbs float roundoff in the equal-argument case
    return phi(m0) / math.sqrt(m0) <= phi(m) / math.sqrt(m) + 1e-12


@dataclass(frozen=True)
class SampleSize:
    """Exact phi-inverse and its quadratic approximation (omega + u)^2."""

    exact: float
    approx: float


def sample_size_m0(omega: float, u: float) -> SampleSize:
    """Phase-transition sample count: t solving phi(t) = omega + u.

    The exact inverse is bracketed in [target^2, target^2 + 1] (phi(t)^2 lies
    in [t - 1, t]); targets below phi(1) fall back to the approximation.
    """
    if omega < 0:
        raise ValidationError("omega must be nonnegative")
    if u <= 0:
        raise ValidationError("u must be positive")
    target = omega + u
    approx = target * target
    if target < phi(1.0):
        return SampleSize(exact=approx, approx=approx)
    lo, hi = approx, approx + 1.0
    exact = brentq(lambda t: phi(t) - target, lo, hi, xtol=1e-10, rtol=1e-12)
    return SampleSize(exact=float(exact), approx=approx)


def min_samples_m1(omega: float) -> float:
    """Approximate minimum sample count omega^2 from a sphere-cap width."""
    if omega < 0:
        raise ValidationError("omega must be nonnegative")
    return omega * omega


def width_bound_sparse(s: int, n: int) -> float:
    """Analytic upper-bound surrogate for the width of the s-sparse l1 cap.

    Returns sqrt(2 s log(n/s)) + 1.5 sqrt(s). This is a bound, not the width
    itself.
    """
    if not (1 <= s <= n):
        raise ValidationError("need 1 <= s <= n, got (%r, %r)" % (s, n))
    return math.sqrt(2.0 * s * math.log(n / s)) + 1.5 * math.sqrt(s)


@dataclass(frozen=True)
class ConeSpec:
    """Descent cone of the structure function at an anchor point.

    A direction h belongs to the descent set when f(anchor + h) <= f(anchor).
    """

    anchor: tuple
    K: FeasibleSet

    @staticmethod
    def at(anchor, K: FeasibleSet) -> "ConeSpec":
        return ConeSpec(anchor=tuple(as_signal(anchor)), K=K)

    def anchor_array(self) -> np.ndarray:
        return np.asarray(self.anchor, dtype=float)

    def is_descent(self, h) -> bool:
        x = self.anchor_array()
        f = self.K.kind
        return structure_value(f, x + np.asarray(h, float)) <= structure_value(f, x)


@dataclass(frozen=True)
class WidthEstimate:
    """Monte Carlo Gaussian-width estimate."""

    mean: float
    stderr: float
    samples: int
    set_label: str


class EuclideanBall:
    def __init__(self, n: int):
        if n < 1:
            raise DimensionError("dimension must be >= 1")
        self.n = n
        self.label = "euclidean_ball(n=%d)" % n

    def support_values(self, G: np.ndarray, rng: RngSpec) -> np.ndarray:
        return np.linalg.norm(G, axis=1)


class Sphere(EuclideanBall):
    def __init__(self, n: int):
        super().__init__(n)
        self.label = "sphere(n=%d)" % n


class L1Cap:
    """T_1^s = {x : ||x||_1 <= sqrt(s), ||x||_2 <= 1}."""

    ascent_iters = 200
    ascent_step = 0.5
    feasibility_rounds = 8

    def __init__(self, s: int, n: int):
        if not (1 <= s <= n):
            raise ValidationError("need 1 <= s <= n")
        self.s = s
        self.n = n
        self.label = "l1_cap(s=%d, n=%d)" % (s, n)

    def support_values(self, G: np.ndarray, rng: RngSpec) -> np.ndarray:
        radius = math.sqrt(self.s)
        X = np.zeros_like(G)
        for _ in range(self.ascent_iters):
            X = X + self.ascent_step * G
            X = self._make_feasible(X, radius)
        return np.sum(G * X, axis=1)

    def _make_feasible(self, X: np.ndarray, radius: float) -> np.ndarray:
        for _ in range(self.feasibility_rounds):
            X = project_l1_ball_rows(X, radius)
            norms = np.linalg.norm(X, axis=1)
            over = norms > 1.0
            if np.any(over):
                X[over] /= norms[over, None]
            else:
                break
        return X


class DescentConeCap:
    """Unit-sphere cap of the descent cone, estimated by sampled directions.

    Candidate directions are z - anchor for points z with f(z) <= f(anchor)
    (for the non-convex l0 kind, z ranges over s-sparse vectors on random
    support unions as a heuristic). The reported value is a lower-bias
    estimate of the true cap width.
    """

    candidate_batch = 64
    ascent_steps = np.geomspace(1e-3, 10.0, 12)

    def __init__(self, cone: ConeSpec):
        self.cone = cone
        self.n = len(cone.anchor)
        self.label = "descent_cone_cap(kind=%s)" % cone.K.kind

    def support_values(self, G: np.ndarray, rng: RngSpec) -> np.ndarray:
        x = self.cone.anchor_array()
        kind = self.cone.K.kind
        fx = structure_value(kind, x)
        gen = rng.stream(rng.stream_id + 1_000_003).generator()
        vals = np.empty(G.shape[0])
        for i, g in enumerate(G):
            vals[i] = self._sup_for_draw(g, x, kind, fx, gen)
        return vals

    def _sup_for_draw(self, g, x, kind, fx, gen) -> float:
        best = 0.0  # the zero direction is always available
        cands = []
        if kind == L0:
            s = int(round(fx))
            if s == 0:
                return 0.0
            support = np.nonzero(x)[0]
            for _ in range(self.candidate_batch // 8):
                extra = gen.choice(x.size, size=min(s, x.size), replace=False)
                union = np.union1d(support, extra)
                for t in self.ascent_steps:
                    z = np.zeros_like(x)
                    z[union] = (x + t * g)[union]
                    cands.append(hard_threshold(z, s) - x)
        else:
            if fx == 0.0:
                return 0.0  # descent set of a norm at the origin is {0}
            ball = FeasibleSet(kind, fx)
            # ascent-aligned candidates plus random probes of the sublevel set
            for t in self.ascent_steps:
                cands.append(ball.project(x + t * g) - x)
            probes = gen.standard_normal((self.candidate_batch, x.size))
            for p in probes:
                cands.append(ball.project(fx * p / np.linalg.norm(p)) - x)
        for d in cands:
            nd = np.linalg.norm(d)
            if nd > 1e-12:
                best = max(best, float(g @ d) / nd)
        return best


def euclidean_ball(n: int) -> EuclideanBall:
    return EuclideanBall(n)


def sphere(n: int) -> Sphere:
    return Sphere(n)


def l1_cap(s: int, n: int) -> L1Cap:
    return L1Cap(s, n)


def descent_cone_cap(cone: ConeSpec) -> DescentConeCap:
    return DescentConeCap(cone)


def gaussian_width_mc(set_spec, samples: int, rng: RngSpec) -> WidthEstimate:
    """Monte Carlo Gaussian width: average of sup_{z in T} <g, z> over draws."""
    if samples < 100:
        raise InsufficientSamplesError(
            "need at least 100 samples, got %d" % samples
        )
    G = rng.generator().standard_normal((samples, set_spec.n))
    vals = set_spec.support_values(G, rng)
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(samples))
    return WidthEstimate(
        mean=mean, stderr=stderr, samples=samples, set_label=set_spec.label
    )
