"""Scikit-learn style estimator wrappers over the constrained solvers.

fit(A, y) treats the sensing matrix as the design matrix. Each estimator
exposes coef_ after fitting and predicts by applying the forward model.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .constraints import FeasibleSet
from .solvers import SolverOptions, solve_clad, solve_cls, solve_cnls


class _ConstrainedRecoveryBase(BaseEstimator, RegressorMixin):
    _solver = None
    _magnitude = False

    def __init__(self, kind="l1", eta=1.0, max_iters=10000, rel_tol=1e-8,
                 step_policy=None, step_c=0.5, init_policy=None):
        self.kind = kind
        self.eta = eta
        self.max_iters = max_iters
        self.rel_tol = rel_tol
        self.step_policy = step_policy
        self.step_c = step_c
        self.init_policy = init_policy

    def _options(self) -> SolverOptions:
        kwargs = dict(max_iters=self.max_iters, rel_tol=self.rel_tol,
                      step_c=self.step_c)
        if self.step_policy is not None:
            kwargs["step_policy"] = self.step_policy
        if self.init_policy is not None:
            kwargs["init_policy"] = self.init_policy
        return SolverOptions(**kwargs)

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        K = FeasibleSet(self.kind, self.eta)
        result = type(self)._solver(X, y, K, self._options())
        self.coef_ = result.x_hat
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        self.objective_history_ = result.objective_history
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        z = X @ self.coef_
        return np.abs(z) if self._magnitude else z


class ConstrainedLeastSquares(_ConstrainedRecoveryBase):
    """min (1/2)||y - X w||_2^2 subject to f(w) <= eta."""

    _solver = staticmethod(solve_cls)


class LeastAbsoluteDeviation(_ConstrainedRecoveryBase):
    """min ||y - X w||_1 subject to f(w) <= eta; robust to sparse corruption."""

    _solver = staticmethod(solve_clad)

    def __init__(self, kind="l1", eta=1.0, max_iters=10000, rel_tol=1e-8,
                 step_policy="diminishing", step_c=0.5, init_policy=None):
        super().__init__(kind=kind, eta=eta, max_iters=max_iters,
                         rel_tol=rel_tol, step_policy=step_policy,
                         step_c=step_c, init_policy=init_policy)


class AmplitudePhaseRetrieval(_ConstrainedRecoveryBase):
    """min (1/2)||y - |X w|||_2^2 subject to f(w) <= eta.

    Magnitude-only measurements; coef_ is identified only up to a global
    sign, so compare against targets with a sign-invariant metric.
    """

    _solver = staticmethod(solve_cnls)
    _magnitude = True

    def __init__(self, kind="l1", eta=1.0, max_iters=10000, rel_tol=1e-8,
                 step_policy=None, step_c=0.5, init_policy="spectral"):
        super().__init__(kind=kind, eta=eta, max_iters=max_iters,
                         rel_tol=rel_tol, step_policy=step_policy,
                         step_c=step_c, init_policy=init_policy)
