"""Closed-form evaluators for the stability bounds and trade-off formulas.

Each evaluator returns a :class:`BoundReport` splitting the bound into its
mismatch term (driven by the gap between the constraint radius and the true
structure value) and its noise term. Case 1 covers a radius at or below the
true value (the mismatch enters through the projection gap); case 2 covers a
too-large radius for absolutely homogeneous structure functions (the mismatch
enters through eta/f(x*) - 1). Hidden constants behind the asymptotic
conditions are exposed as explicit calibration parameters.

Note: for the least-squares case-1 bound the source statement carries a
noise coefficient 4 rho/(1-rho)^2 while its derivation yields 2 rho/(1-rho)^2;
the stated coefficient is implemented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import HALF_SAMPLE_V0, MEAN_ABS_NORMAL
from .exceptions import (
    AdmissibilityError,
    ConfigurationError,
    InfeasibleTargetError,
    SampleBudgetError,
    ValidationError,
)

V0 = HALF_SAMPLE_V0
SQRT_2_OVER_PI = MEAN_ABS_NORMAL

CASE1 = "case1_f_ge_eta"
CASE2 = "case2_f_lt_eta"


@dataclass(frozen=True)
class BoundInputs:
    """Parameters feeding the bound evaluators.

    Only the fields an evaluator actually uses need to be populated; see each
    evaluator for its requirements.
    """

    m: int = 0
    m0: float = 0.0
    u: float = 0.0
    delta: float = 0.0
    gamma: float = 4.0
    beta: float = 26.0
    eta: float = 0.0
    f_star: float = 0.0
    norm_x_star: float = 0.0
    proj_gap: float = 0.0
    noise_l2: float = 0.0
    noise_l1: float = 0.0
    rho: float | None = None
    epsilon: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("m0", "proj_gap", "noise_l2", "noise_l1", "norm_x_star"):
            if getattr(self, name) < 0:
                raise ValidationError("%s must be nonnegative" % name)


@dataclass(frozen=True)
class BoundReport:
    value: float
    mismatch_term: float
    noise_term: float
    rho: float
    case_tag: str
    theorem_tag: str


def rho_rate(m0: float, m: float, c: float = 1.0) -> float:
    """Rate c sqrt(m0/m); rejects rates >= 1 (the bounds need 1 - rho > 0)."""
    if m <= 0:
        raise ValidationError("m must be positive")
    if m0 < 0:
        raise ValidationError("m0 must be nonnegative")
    if c < 1.0:
        raise ValidationError("rate multiplier must be >= 1")
    rho = c * math.sqrt(m0 / m)
    if rho >= 1.0:
        raise SampleBudgetError(
            "measurement budget below threshold: rho = %.4f >= 1" % rho
        )
    return rho


def _resolve_rho(inputs: BoundInputs, c: float = 1.0) -> float:
    if inputs.rho is not None:
        rho = inputs.rho
        if rho >= 1.0:
            raise SampleBudgetError("rho = %.4f >= 1" % rho)
        if rho < 0:
            raise ValidationError("rho must be nonnegative")
        return rho
    return rho_rate(inputs.m0, inputs.m, c)


def _noise_per_root_m(inputs: BoundInputs) -> float:
    if inputs.m <= 0:
        raise ValidationError("m must be positive")
    return inputs.noise_l2 / math.sqrt(inputs.m)


def _report(mismatch, noise, rho, case, tag) -> BoundReport:
    return BoundReport(
        value=mismatch + noise,
        mismatch_term=mismatch,
        noise_term=noise,
        rho=rho,
        case_tag=case,
        theorem_tag=tag,
    )


def bound_cls_case1(inputs: BoundInputs) -> BoundReport:
    """Least-squares bound for f(x*) >= eta."""
    rho = _resolve_rho(inputs)
    mismatch = 3.0 * math.sqrt(2.0) / (2.0 * (1.0 - rho)) * inputs.proj_gap
    noise_coeff = (
        4.0 * math.sqrt(2.0) * rho / (3.0 * (1.0 - rho))
        + 4.0 * rho / (1.0 - rho) ** 2
    )
    noise = noise_coeff * _noise_per_root_m(inputs)
    return _report(mismatch, noise, rho, CASE1, "cls_case1")


def _require_case2(inputs: BoundInputs) -> float:
    """Validate 0 < f* < eta and return the radius mismatch eta/f* - 1."""
    if inputs.f_star <= 0:
        raise ValidationError("case 2 requires f(x*) > 0")
    if inputs.eta <= inputs.f_star:
        raise AdmissibilityError("case 2 requires eta > f(x*)")
    return inputs.eta / inputs.f_star - 1.0


def bound_cls_case2(inputs: BoundInputs) -> BoundReport:
    """Least-squares bound for 0 < f(x*) < eta (homogeneous f only)."""
    gap = _require_case2(inputs)
    rho = _resolve_rho(inputs)
    mismatch = (6.0 * rho / (1.0 - rho) ** 2 + 1.0) * gap * inputs.norm_x_star
    noise = 4.0 * rho / (1.0 - rho) ** 2 * _noise_per_root_m(inputs)
    return _report(mismatch, noise, rho, CASE2, "cls_case2")


def _delta_rho(inputs: BoundInputs) -> float:
    if not (0.0 < inputs.delta < 1.0):
        raise AdmissibilityError("delta must lie in (0, 1)")
    if inputs.m < inputs.m0 / inputs.delta**2:
        raise ConfigurationError(
            "need m >= m0/delta^2 = %.2f" % (inputs.m0 / inputs.delta**2)
        )
    rho = math.sqrt(inputs.m0 / inputs.m) / inputs.delta
    if rho >= 1.0:
        raise SampleBudgetError("rho = %.4f >= 1" % rho)
    return rho


def bound_cls_delta_case1(inputs: BoundInputs) -> BoundReport:
    """Delta-variant least-squares bound, f(x*) >= eta."""
    rho = _delta_rho(inputs)
    mismatch = math.sqrt(2.0) * (1.0 + inputs.delta) / (1.0 - rho) * inputs.proj_gap
    noise_coeff = (
        4.0 * math.sqrt(2.0) * rho / (3.0 * (1.0 - rho))
        + 4.0 * rho / (1.0 - rho) ** 2
    )
    noise = noise_coeff * _noise_per_root_m(inputs)
    return _report(mismatch, noise, rho, CASE1, "cls_delta_case1")


def bound_cls_delta_case2(inputs: BoundInputs) -> BoundReport:
    """Delta-variant least-squares bound, 0 < f(x*) < eta."""
    gap = _require_case2(inputs)
    rho = _delta_rho(inputs)
    mismatch = (
        4.0 * rho * (1.0 + inputs.delta) / (1.0 - rho) ** 2 + 1.0
    ) * gap * inputs.norm_x_star
    noise = 4.0 * rho / (1.0 - rho) ** 2 * _noise_per_root_m(inputs)
    return _report(mismatch, noise, rho, CASE2, "cls_delta_case2")


def _lad_checks(inputs: BoundInputs, m1: float) -> float:
    if inputs.gamma < 4.0:
        raise AdmissibilityError("gamma must be >= 4")
    if inputs.beta <= (1.25 * inputs.gamma) ** 2:
        raise AdmissibilityError("beta must exceed (5 gamma / 4)^2")
    if inputs.m <= inputs.beta * m1:
        raise ConfigurationError(
            "need m > beta * m1 = %.2f" % (inputs.beta * m1)
        )
    rho = inputs.gamma * math.sqrt(m1 / inputs.m)
    if not (0.0 < inputs.u < SQRT_2_OVER_PI - rho):
        raise AdmissibilityError(
            "u must lie in (0, sqrt(2/pi) - rho) = (0, %.4f)"
            % (SQRT_2_OVER_PI - rho)
        )
    return rho


def bound_clad_case1(inputs: BoundInputs) -> BoundReport:
    """Least-absolute-deviation bound for f(x*) >= eta (m0 field holds m1)."""
    rho = _lad_checks(inputs, inputs.m0)
    denom = SQRT_2_OVER_PI - rho - inputs.u
    mismatch = (SQRT_2_OVER_PI + rho + inputs.u) / denom * inputs.proj_gap
    noise = 2.0 / denom * inputs.noise_l1 / inputs.m
    return _report(mismatch, noise, rho, CASE1, "clad_case1")


def bound_clad_case2(inputs: BoundInputs) -> BoundReport:
    """Least-absolute-deviation bound for 0 < f(x*) < eta."""
    gap = _require_case2(inputs)
    rho = _lad_checks(inputs, inputs.m0)
    denom = SQRT_2_OVER_PI - rho - inputs.u
    mismatch = (
        (3.0 * SQRT_2_OVER_PI + rho + inputs.u) / denom * gap * inputs.norm_x_star
    )
    noise = 2.0 / denom * inputs.noise_l1 / inputs.m
    return _report(mismatch, noise, rho, CASE2, "clad_case2")


def bound_clad_corruption(
    inputs: BoundInputs,
    s: int,
    corruption_fraction: float,
    l1_star: float,
    leading_constant: float = 1.0,
) -> float:
    """Corruption-supplement bound for the too-small-radius regime.

    Valid when l1_star = ||x*||_1 > eta, alpha >= 2/epsilon, and the sparse
    corruption fraction stays below 0.239 - epsilon. The leading constant of
    the asymptotic inequality is exposed as a calibration input.
    """
    beta0 = 0.239
    if inputs.epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    if inputs.alpha < 2.0 / inputs.epsilon:
        raise AdmissibilityError("alpha must be >= 2/epsilon")
    if corruption_fraction >= beta0 - inputs.epsilon:
        raise AdmissibilityError(
            "corruption fraction must stay below %.3f - epsilon" % beta0
        )
    if l1_star < inputs.eta:
        raise AdmissibilityError("corruption bound requires ||x*||_1 > eta")
    if s < 1:
        raise ValidationError("sparsity must be >= 1")
    if inputs.m <= 0:
        raise ValidationError("m must be positive")
    dense = inputs.noise_l1 / inputs.m
    lead = leading_constant / (inputs.epsilon - 1.0 / inputs.alpha) * (
        dense + (math.sqrt(1.0 / (2.0 * math.pi)) + inputs.epsilon / 2.0)
        * inputs.proj_gap
    )
    return lead + (l1_star - inputs.eta) / (inputs.alpha * math.sqrt(s))


def bound_cnls_case1(inputs: BoundInputs) -> BoundReport:
    """Amplitude-model bound for f(x*) >= eta (sign-invariant metric)."""
    rho = _resolve_rho(inputs)
    mismatch = (4.0 * rho / V0 + 4.0 / V0 + 1.0) * inputs.proj_gap
    noise = 4.0 / V0 * _noise_per_root_m(inputs)
    return _report(mismatch, noise, rho, CASE1, "cnls_case1")


def bound_cnls_case2(inputs: BoundInputs) -> BoundReport:
    """Amplitude-model bound for 0 < f(x*) < eta."""
    gap = _require_case2(inputs)
    rho = _resolve_rho(inputs)
    mismatch = (24.0 * rho / V0**2 + 3.0 / V0 + 1.0) * gap * inputs.norm_x_star
    noise = (16.0 * rho / V0**2 + 2.0 / V0) * _noise_per_root_m(inputs)
    return _report(mismatch, noise, rho, CASE2, "cnls_case2")


def tradeoff_samples_lad(mismatch: float, epsilon: float, u: float, m0: float) -> float:
    """Samples needed for relative accuracy epsilon at a given radius mismatch.

    m >= m0 (mismatch + eps)^2 / (C2 eps - C1 mismatch)^2 with
    C1 = 3 sqrt(2/pi) + u, C2 = sqrt(2/pi) - u.
    """
    if mismatch < 0 or epsilon <= 0 or m0 < 0:
        raise ValidationError("invalid trade-off inputs")
    if not (0.0 < u < SQRT_2_OVER_PI):
        raise AdmissibilityError("u must lie in (0, sqrt(2/pi))")
    c1 = 3.0 * SQRT_2_OVER_PI + u
    c2 = SQRT_2_OVER_PI - u
    denom = c2 * epsilon - c1 * mismatch
    # relative tolerance so the exact boundary raises despite float roundoff
    if denom <= 1e-12 * c2 * epsilon:
        raise InfeasibleTargetError(
            "target unreachable: need C2*eps > C1*mismatch "
            "(%.6f <= %.6f)" % (c2 * epsilon, c1 * mismatch)
        )
    return m0 * (mismatch + epsilon) ** 2 / denom**2


def tradeoff_samples_pr(mismatch: float, epsilon: float, m0: float) -> float:
    """Samples needed in the amplitude model: m >= 16 m0 mismatch^2 / (eps v0 - (4+v0) mismatch)^2."""
    if mismatch < 0 or epsilon <= 0 or m0 < 0:
        raise ValidationError("invalid trade-off inputs")
    denom = epsilon * V0 - (4.0 + V0) * mismatch
    if denom <= 1e-12 * epsilon * V0:
        raise InfeasibleTargetError(
            "target unreachable: need eps*v0 > (4+v0)*mismatch"
        )
    return m0 * 16.0 * mismatch**2 / denom**2


def bound_lasso_specialized(
    s: int, n: int, m: int, noise_l2: float,
    constant: float = 10.0, sample_constant: float = 1.0,
) -> float:
    """Specialized l1 bound C sqrt(s log n / m) ||e||_2 / sqrt(m).

    Calibration constant C defaults to 10; requires m >= c s log n.
    """
    if s < 1 or n < s or m < 1:
        raise ValidationError("invalid dimensions")
    if noise_l2 < 0:
        raise ValidationError("noise must be nonnegative")
    slogn = s * math.log(n)
    if m < sample_constant * slogn:
        raise ConfigurationError(
            "need m >= %.2f (c * s log n)" % (sample_constant * slogn)
        )
    return constant * math.sqrt(slogn / m) * noise_l2 / math.sqrt(m)
