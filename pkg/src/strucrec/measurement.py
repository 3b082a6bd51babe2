"""Gaussian sensing matrices, measurement models, noise, and empirical
verification of the concentration lemmas the error bounds rest on.

The lemma checkers replace suprema over infinite index sets with finite probe
sets (a necessary discretization) and allow a 0.05 slack on every probability
assertion to absorb finite-trial binomial noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import HALF_SAMPLE_V0, MEAN_ABS_NORMAL
from .exceptions import (
    ConfigurationError,
    DegenerateSignalError,
    DimensionError,
    ValidationError,
)
from .rng import RngSpec
from .validation import as_matrix, as_signal, check_conformable

NOISE_KINDS = ("none", "gaussian", "sparse_adversarial", "heavy_tailed_student_t")


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "none"
    sigma: float = 0.0
    fraction: float = 0.0
    magnitude: float = 0.0
    dof: float = 3.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValidationError("unknown noise kind %r" % (self.kind,))
        if not (0.0 <= self.fraction < 1.0):
            raise ValidationError("corruption fraction must lie in [0, 1)")
        if self.sigma < 0 or self.magnitude < 0 or self.scale < 0:
            raise ValidationError("noise scales must be nonnegative")
        if self.dof <= 0:
            raise ValidationError("degrees of freedom must be positive")


def gaussian_matrix(m: int, n: int, rng: RngSpec) -> np.ndarray:
    """m x n matrix of i.i.d. standard normal entries."""
    if m < 1 or n < 1:
        raise DimensionError("matrix dimensions must be >= 1")
    return rng.generator().standard_normal((m, n))


def make_noise(spec: NoiseSpec, m: int, rng: RngSpec) -> np.ndarray:
    if m < 1:
        raise DimensionError("noise length must be >= 1")
    gen = rng.generator()
    if spec.kind == "none":
        return np.zeros(m)
    if spec.kind == "gaussian":
        return spec.sigma * gen.standard_normal(m)
    if spec.kind == "sparse_adversarial":
        e = np.zeros(m)
        k = int(spec.fraction * m)
        if k > 0:
            idx = gen.choice(m, size=k, replace=False)
            signs = np.where(gen.random(k) < 0.5, -1.0, 1.0)
            e[idx] = signs * spec.magnitude
        return e
    # heavy_tailed_student_t
    return spec.scale * gen.standard_t(spec.dof, size=m)


@dataclass(frozen=True)
class MeasurementSet:
    kind: str  # "linear" | "magnitude"
    y: np.ndarray
    noise_realization: np.ndarray
    A: np.ndarray = field(repr=False)


def measure_linear(A, x, e) -> MeasurementSet:
    """y = A x + e."""
    A, x, e = as_matrix(A), as_signal(x), as_signal(e, "e")
    check_conformable(A, x=x, y=e)
    return MeasurementSet(kind="linear", y=A @ x + e, noise_realization=e, A=A)


def measure_magnitude(A, x, e) -> MeasurementSet:
    """y = |A x| + e, componentwise absolute value."""
    A, x, e = as_matrix(A), as_signal(x), as_signal(e, "e")
    check_conformable(A, x=x, y=e)
    return MeasurementSet(
        kind="magnitude", y=np.abs(A @ x) + e, noise_realization=e, A=A
    )


def probe_set_width(probes, draws: int, rng: RngSpec) -> tuple[float, float]:
    """Monte Carlo width of a finite probe set: E max_j <g, x_j>.

    Returns (mean, stderr).
    """
    P = np.asarray(probes, dtype=float)
    G = rng.generator().standard_normal((draws, P.shape[1]))
    vals = (G @ P.T).max(axis=1)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(draws))


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an empirical lemma check."""

    frequency: float
    threshold: float
    passed: bool
    details: dict = field(default_factory=dict)


_SLACK = 0.05
_WIDTH_DRAWS = 2000


def _default_probes(n: int, count: int, rng: RngSpec) -> np.ndarray:
    G = rng.generator().standard_normal((count, n))
    return G / np.linalg.norm(G, axis=1, keepdims=True)


def check_two_sided_deviation(n, m, probes, trials, delta, u, rng: RngSpec) -> CheckResult:
    """Two-sided deviation | ||Ax||_2/phi(m) - ||x||_2 | <= delta ||x||_2.

    Requires m >= (width + u)^2 / delta^2 for the probe set; the assertion
    threshold is 1 - 2 exp(-u^2/2) minus the binomial slack.
    """
    from .geometry import phi

    if probes is None:
        probes = _default_probes(n, 8, rng.stream(rng.stream_id + 11))
    P = np.asarray(probes, dtype=float)
    omega, _ = probe_set_width(P, _WIDTH_DRAWS, rng.stream(rng.stream_id + 13))
    omega = max(omega, 0.0)
    if m < (omega + u) ** 2 / delta**2:
        raise ConfigurationError(
            "m=%d below the deviation-lemma threshold %.2f"
            % (m, (omega + u) ** 2 / delta**2)
        )
    pm = phi(m)
    norms = np.linalg.norm(P, axis=1)
    hits = 0
    for t in range(trials):
        A = gaussian_matrix(m, n, rng.stream(rng.stream_id + 100 + t))
        dev = np.abs(np.linalg.norm(A @ P.T, axis=0) / pm - norms)
        if np.all(dev <= delta * norms):
            hits += 1
    freq = hits / trials
    threshold = 1.0 - 2.0 * math.exp(-(u**2) / 2.0) - _SLACK
    return CheckResult(
        frequency=freq,
        threshold=threshold,
        passed=freq >= threshold,
        details={"omega_hat": omega, "m": m, "delta": delta, "u": u},
    )


def check_l1_concentration(n, m, trials, u, rng: RngSpec, probes=None) -> CheckResult:
    """Concentration of (1/m)||Ax||_1 around sqrt(2/pi) ||x||_2.

    mean(Z) is compared to 4 * width / sqrt(m) (width of the symmetrized
    probe set, since the statistic is two-sided) plus Monte Carlo slack, and
    the tail frequency to 2 exp(-m u^2 / 2) plus slack.
    """
    if probes is None:
        probes = _default_probes(n, 8, rng.stream(rng.stream_id + 11))
    P = np.asarray(probes, dtype=float)
    sym = np.vstack([P, -P])
    omega, _ = probe_set_width(sym, _WIDTH_DRAWS, rng.stream(rng.stream_id + 13))
    omega = max(omega, 0.0)
    norms = np.linalg.norm(P, axis=1)
    zs = np.empty(trials)
    for t in range(trials):
        A = gaussian_matrix(m, n, rng.stream(rng.stream_id + 100 + t))
        stat = np.abs(
            np.abs(A @ P.T).sum(axis=0) / m - MEAN_ABS_NORMAL * norms
        )
        zs[t] = stat.max()
    mean_z = float(zs.mean())
    stderr = float(zs.std(ddof=1) / math.sqrt(trials))
    mean_bound = 4.0 * omega / math.sqrt(m) + 3.0 * stderr
    tail_level = 4.0 * omega / math.sqrt(m) + u
    tail_freq = float(np.mean(zs > tail_level))
    tail_bound = 2.0 * math.exp(-m * u**2 / 2.0) + _SLACK
    passed = mean_z <= mean_bound and tail_freq <= tail_bound
    return CheckResult(
        frequency=tail_freq,
        threshold=tail_bound,
        passed=passed,
        details={
            "mean_z": mean_z,
            "mean_bound": mean_bound,
            "stderr": stderr,
            "omega_hat": omega,
            "tail_freq": tail_freq,
            "tail_bound": tail_bound,
        },
    )


def check_half_sample_lower(x_bar, m, trials, rng: RngSpec) -> CheckResult:
    """Half-sample lower bound min_{|Omega| >= m/2} ||A_Omega x|| >= (v0/2) sqrt(m) ||x||.

    The minimizing Omega keeps the m/2 smallest |<a_i, x>|, which is the
    exact minimizer, so the check needs no combinatorial search.
    """
    x_bar = as_signal(x_bar, "x_bar")
    nrm = np.linalg.norm(x_bar)
    if nrm == 0.0:
        raise DegenerateSignalError("half-sample check needs a nonzero vector")
    if m < 8:
        raise ValidationError("need m >= 8")
    keep = int(math.ceil(m / 2.0))
    level = 0.5 * HALF_SAMPLE_V0 * math.sqrt(m) * nrm
    hits = 0
    for t in range(trials):
        gen = rng.stream(rng.stream_id + 100 + t).generator()
        z = nrm * gen.standard_normal(m)  # entries of A x_bar
        smallest = np.sort(np.abs(z))[:keep]
        if np.linalg.norm(smallest) >= level:
            hits += 1
    freq = hits / trials
    threshold = 1.0 - 2.0 * math.exp(-(HALF_SAMPLE_V0**2) * m / 8.0) - _SLACK
    return CheckResult(
        frequency=freq,
        threshold=threshold,
        passed=freq >= threshold,
        details={"v0": HALF_SAMPLE_V0, "level": level, "m": m},
    )


def check_inner_product_bound(probes, m, n, trials, u, rng: RngSpec) -> CheckResult:
    """sup over probes of |<x, A^T e>| <= ||e||_2 (width + u), e fresh per trial.

    The unspecified constant in the probability exponent is taken as 1 and the
    assertion made one-sided conservative: threshold 1 - 2 exp(-u^2) - slack.
    """
    if probes is None:
        probes = _default_probes(n, 8, rng.stream(rng.stream_id + 11))
    P = np.asarray(probes, dtype=float)
    if np.any(np.linalg.norm(P, axis=1) > 1.0 + 1e-9):
        raise ValidationError("probe set must lie inside the unit ball")
    omega, _ = probe_set_width(P, _WIDTH_DRAWS, rng.stream(rng.stream_id + 13))
    omega = max(omega, 0.0)
    hits = 0
    for t in range(trials):
        A = gaussian_matrix(m, n, rng.stream(rng.stream_id + 100 + t))
        e = (
            rng.stream(rng.stream_id + 1_000_000 + t)
            .generator()
            .standard_normal(m)
        )
        lhs = np.abs(P @ (A.T @ e)).max()
        if lhs <= np.linalg.norm(e) * (omega + u):
            hits += 1
    freq = hits / trials
    threshold = 1.0 - 2.0 * math.exp(-(u**2)) - _SLACK
    return CheckResult(
        frequency=freq,
        threshold=threshold,
        passed=freq >= threshold,
        details={"omega_hat": omega, "u": u},
    )
