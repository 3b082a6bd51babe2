"""strucrec: constrained structured-signal recovery.

Three estimation models over sublevel-set constraints f(x) <= eta (sparsity
count, l1 norm, l2 norm): constrained least squares, constrained least
absolute deviation, and amplitude-based nonlinear least squares, together
with Gaussian-width sample-complexity machinery, closed-form stability
bounds, and a reproducible experiment harness.
"""

from .bounds import (
    BoundInputs,
    BoundReport,
    bound_clad_case1,
    bound_clad_case2,
    bound_clad_corruption,
    bound_cls_case1,
    bound_cls_case2,
    bound_cls_delta_case1,
    bound_cls_delta_case2,
    bound_cnls_case1,
    bound_cnls_case2,
    bound_lasso_specialized,
    rho_rate,
    tradeoff_samples_lad,
    tradeoff_samples_pr,
)
from .constants import HALF_SAMPLE_V0, MEAN_ABS_NORMAL
from .constraints import (
    FeasibleSet,
    hard_threshold,
    project,
    project_l1_ball,
    project_l2_ball,
    structure_value,
)
from .estimators import (
    AmplitudePhaseRetrieval,
    ConstrainedLeastSquares,
    LeastAbsoluteDeviation,
)
from .exceptions import StrucRecError, ValidationError
from .geometry import (
    ConeSpec,
    WidthEstimate,
    descent_cone_cap,
    euclidean_ball,
    gaussian_width_mc,
    l1_cap,
    min_samples_m1,
    phi,
    sample_size_m0,
    sphere,
    width_bound_sparse,
)
from .harness import (
    ExperimentConfig,
    TrialRecord,
    default_config,
    gen_ground_truth,
    run_mismatch_sweep,
    run_phase_transition,
    run_robustness_comparison,
    verify_bounds,
)
from .measurement import (
    MeasurementSet,
    NoiseSpec,
    gaussian_matrix,
    make_noise,
    measure_linear,
    measure_magnitude,
)
from .rng import RngSpec, derive_seed
from .solvers import (
    RecoveryResult,
    SolverOptions,
    relative_error,
    sign_invariant_error,
    solve_clad,
    solve_cls,
    solve_cnls,
    spectral_init,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudePhaseRetrieval",
    "BoundInputs",
    "BoundReport",
    "ConeSpec",
    "ConstrainedLeastSquares",
    "ExperimentConfig",
    "FeasibleSet",
    "HALF_SAMPLE_V0",
    "LeastAbsoluteDeviation",
    "MEAN_ABS_NORMAL",
    "MeasurementSet",
    "NoiseSpec",
    "RecoveryResult",
    "RngSpec",
    "SolverOptions",
    "StrucRecError",
    "TrialRecord",
    "ValidationError",
    "WidthEstimate",
    "bound_clad_case1",
    "bound_clad_case2",
    "bound_clad_corruption",
    "bound_cls_case1",
    "bound_cls_case2",
    "bound_cls_delta_case1",
    "bound_cls_delta_case2",
    "bound_cnls_case1",
    "bound_cnls_case2",
    "bound_lasso_specialized",
    "default_config",
    "derive_seed",
    "descent_cone_cap",
    "euclidean_ball",
    "gaussian_matrix",
    "gaussian_width_mc",
    "gen_ground_truth",
    "hard_threshold",
    "l1_cap",
    "make_noise",
    "measure_linear",
    "measure_magnitude",
    "min_samples_m1",
    "phi",
    "project",
    "project_l1_ball",
    "project_l2_ball",
    "relative_error",
    "rho_rate",
    "run_mismatch_sweep",
    "run_phase_transition",
    "run_robustness_comparison",
    "sample_size_m0",
    "sign_invariant_error",
    "solve_clad",
    "solve_cls",
    "solve_cnls",
    "spectral_init",
    "sphere",
    "structure_value",
    "tradeoff_samples_lad",
    "tradeoff_samples_pr",
    "verify_bounds",
    "width_bound_sparse",
]
