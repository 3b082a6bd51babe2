"""Iterative solvers for the three constrained recovery models.

The theory concerns global minimizers; these solvers are computational
surrogates. The least-squares model is solved by projected gradient descent
(globally optimal for convex feasible sets), least absolute deviation by a
projected subgradient method with a diminishing step and best-iterate
tracking, and the amplitude model by projected amplitude flow with an
optional spectral initializer. For the non-convex cases (l0 sets, amplitude
objective) the results are local and downstream experiments report success
rates instead of assuming global optimality.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .constraints import FeasibleSet
from .exceptions import DegenerateSignalError, DimensionError, ValidationError
from .linalg import operator_norm
from .rng import RngSpec
from .validation import as_matrix, as_signal, check_conformable

STEP_POLICIES = ("fixed_inverse_lipschitz", "diminishing", "polyak")
INIT_POLICIES = ("zero", "spectral", "given")


@dataclass(frozen=True)
class SolverOptions:
    max_iters: int = 10000
    rel_tol: float = 1e-8
    step_policy: str = "fixed_inverse_lipschitz"
    step_c: float = 0.5
    init_policy: str = "zero"
    x0: tuple | None = None
    rng: RngSpec = RngSpec(0, 0)

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValidationError("max_iters must be >= 1")
        if self.rel_tol <= 0:
            raise ValidationError("rel_tol must be positive")
        if self.step_policy not in STEP_POLICIES:
            raise ValidationError("unknown step policy %r" % (self.step_policy,))
        if self.init_policy not in INIT_POLICIES:
            raise ValidationError("unknown init policy %r" % (self.init_policy,))
        if self.step_c <= 0:
            raise ValidationError("step_c must be positive")

    def with_x0(self, x0) -> "SolverOptions":
        return replace(self, init_policy="given", x0=tuple(np.asarray(x0, float)))


@dataclass(frozen=True)
class RecoveryResult:
    x_hat: np.ndarray
    iterations: int
    objective_history: tuple
    converged: bool
    wall_time_ms: float


def _initial_point(A, y, K, opts, magnitude: bool) -> np.ndarray:
    n = A.shape[1]
    if opts.init_policy == "zero":
        return np.zeros(n)
    if opts.init_policy == "given":
        if opts.x0 is None:
            raise ValidationError("init policy 'given' requires x0")
        x0 = as_signal(np.asarray(opts.x0, float), "x0")
        if x0.size != n:
            raise DimensionError("x0 has wrong dimension")
        return K.project(x0)
    if not magnitude:
        raise ValidationError("spectral init applies to magnitude measurements")
    return K.project(spectral_init(A, y))


def spectral_init(A, y, power_iters: int = 100) -> np.ndarray:
    """Leading eigenvector of (1/m) A^T diag(y^2) A, scaled to sqrt(mean y^2).

    Standard amplitude-flow initializer: E[y_i^2 a_i a_i^T] concentrates
    around ||x||^2 I + 2 x x^T, so the top eigenvector aligns with x and
    mean(y^2) estimates ||x||^2.
    """
    A = as_matrix(A)
    y = as_signal(y, "y")
    m, n = A.shape
    w = y**2
    v = np.ones(n) / np.sqrt(n)
    for _ in range(power_iters):
        v = A.T @ (w * (A @ v)) / m
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return np.zeros(n)
        v = v / nv
    # canonical sign: objective is invariant under the global flip
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return float(np.sqrt(np.mean(w))) * v


def _finish(x_best, iters, history, converged, t0) -> RecoveryResult:
    return RecoveryResult(
        x_hat=x_best,
        iterations=iters,
        objective_history=tuple(history),
        converged=converged,
        wall_time_ms=(time.perf_counter() - t0) * 1e3,
    )


def solve_cls(A, y, K: FeasibleSet, opts: SolverOptions = SolverOptions()) -> RecoveryResult:
    """Constrained least squares min_{x in K} (1/2)||y - A x||_2^2.

    Projected gradient descent with step 0.9 / ||A||^2 under the fixed
    inverse-Lipschitz policy; stops on relative iterate change below rel_tol.
    """
    t0 = time.perf_counter()
    A = as_matrix(A)
    y = as_signal(y, "y")
    check_conformable(A, y=y)
    L2 = operator_norm(A) ** 2
    G = A.T @ A
    b = A.T @ y
    yy = float(y @ y)

    def objective(x):
        return 0.5 * (float(x @ (G @ x)) - 2.0 * float(b @ x) + yy)

    x = _initial_point(A, y, K, opts, magnitude=False)
    fx = objective(x)
    history = [fx]
    best_x, best_f = x, fx
    converged = False
    iters = 0
    for k in range(1, opts.max_iters + 1):
        grad = G @ x - b
        mu = _step(opts, L2, k, fx, grad)
        x_new = K.project(x - mu * grad)
        fx = objective(x_new)
        history.append(fx)
        if fx < best_f:
            best_f, best_x = fx, x_new
        delta = np.linalg.norm(x_new - x)
        scale = max(np.linalg.norm(x), 1e-30)
        x = x_new
        iters = k
        if delta <= opts.rel_tol * scale:
            converged = True
            break
    return _finish(best_x, iters, history, converged, t0)


def _step(opts: SolverOptions, L2: float, k: int, fx: float, grad) -> float:
    if opts.step_policy == "fixed_inverse_lipschitz":
        return 0.9 / L2 if L2 > 0 else 1.0
    if opts.step_policy == "diminishing":
        base = np.sqrt(L2) if L2 > 0 else 1.0
        return opts.step_c / (np.sqrt(k) * base)
    # polyak: assumes the optimal value is (near) zero
    g2 = float(grad @ grad)
    return fx / g2 if g2 > 0 else 0.0


def solve_clad(A, y, K: FeasibleSet, opts: SolverOptions | None = None) -> RecoveryResult:
    """Constrained least absolute deviation min_{x in K} ||y - A x||_1.

    Projected subgradient steps along -A^T sign(Ax - y) (sign(0) = 0) with a
    diminishing step c/sqrt(k) scaled by 1/||A||. Subgradient descent is
    non-monotone, so the best-objective iterate is tracked and returned.
    """
    t0 = time.perf_counter()
    if opts is None:
        opts = SolverOptions(step_policy="diminishing")
    A = as_matrix(A)
    y = as_signal(y, "y")
    check_conformable(A, y=y)
    L = operator_norm(A)
    scale_inv = 1.0 / L if L > 0 else 1.0

    x = _initial_point(A, y, K, opts, magnitude=False)
    r = A @ x - y
    fx = float(np.sum(np.abs(r)))
    history = [fx]
    best_x, best_f = x, fx
    converged = False
    iters = 0
    for k in range(1, opts.max_iters + 1):
        g = A.T @ np.sign(r)
        if opts.step_policy == "polyak":
            g2 = float(g @ g)
            step = (fx - best_f + 1e-12) / g2 if g2 > 0 else 0.0
        elif opts.step_policy == "fixed_inverse_lipschitz":
            step = 0.9 * scale_inv**2
        else:
            step = opts.step_c * scale_inv / np.sqrt(k)
        x_new = K.project(x - step * g)
        r = A @ x_new - y
        fx = float(np.sum(np.abs(r)))
        history.append(fx)
        if fx < best_f:
            best_f, best_x = fx, x_new
        delta = np.linalg.norm(x_new - x)
        scale = max(np.linalg.norm(x), 1e-30)
        x = x_new
        iters = k
        if delta <= opts.rel_tol * scale:
            converged = True
            break
    return _finish(best_x, iters, history, converged, t0)


def solve_cnls(A, y, K: FeasibleSet, opts: SolverOptions = SolverOptions()) -> RecoveryResult:
    """Constrained amplitude least squares min_{x in K} (1/2)||y - |A x|||_2^2.

    Projected amplitude flow: the current sign pattern of Ax serves as the
    phase surrogate (sign(0) = +1), giving the gradient step
    x <- P_K(x - mu A^T (A x - y . sign(A x))) with mu = 0.9/||A||^2.
    """
    t0 = time.perf_counter()
    A = as_matrix(A)
    y = as_signal(y, "y")
    check_conformable(A, y=y)
    if np.any(y < 0):
        # noise can push magnitude measurements negative; proceed as-is
        pass
    L2 = operator_norm(A) ** 2
    mu = 0.9 / L2 if L2 > 0 else 1.0

    x = _initial_point(A, y, K, opts, magnitude=True)
    Ax = A @ x

    def objective(Ax_val):
        return 0.5 * float(np.sum((y - np.abs(Ax_val)) ** 2))

    fx = objective(Ax)
    history = [fx]
    best_x, best_f = x, fx
    converged = False
    iters = 0
    for k in range(1, opts.max_iters + 1):
        signs = np.where(Ax >= 0, 1.0, -1.0)
        grad = A.T @ (Ax - y * signs)
        x_new = K.project(x - mu * grad)
        Ax = A @ x_new
        fx = objective(Ax)
        history.append(fx)
        if fx < best_f:
            best_f, best_x = fx, x_new
        delta = np.linalg.norm(x_new - x)
        scale = max(np.linalg.norm(x), 1e-30)
        x = x_new
        iters = k
        if delta <= opts.rel_tol * scale:
            converged = True
            break
    return _finish(best_x, iters, history, converged, t0)


def sign_invariant_error(x_hat, x_star) -> float:
    """min(||x_hat - x*||_2, ||x_hat + x*||_2), the magnitude-model metric."""
    x_hat = as_signal(x_hat, "x_hat")
    x_star = as_signal(x_star, "x_star")
    if x_hat.size != x_star.size:
        raise DimensionError("vectors must have equal dimension")
    return float(
        min(np.linalg.norm(x_hat - x_star), np.linalg.norm(x_hat + x_star))
    )


def relative_error(x_hat, x_star) -> float:
    """||x_hat - x*||_2 / ||x*||_2."""
    x_hat = as_signal(x_hat, "x_hat")
    x_star = as_signal(x_star, "x_star")
    if x_hat.size != x_star.size:
        raise DimensionError("vectors must have equal dimension")
    nrm = np.linalg.norm(x_star)
    if nrm == 0.0:
        raise DegenerateSignalError("relative error undefined for zero x*")
    return float(np.linalg.norm(x_hat - x_star) / nrm)
