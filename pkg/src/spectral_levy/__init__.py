"""Spectral estimation of the characteristic triplet of a compound-Poisson-plus-Brownian Levy process."""

from .ecf import (
    EcfGrid,
    UnresolvedWinding,
    ZeroModulus,
    compute_ecf,
    dist_log,
    truncate_log_modulus,
    zero_risk_diagnostic,
)
from .estimators import (
    DensityEstimate,
    EstimatorConfig,
    TripletEstimate,
    default_config,
    estimate,
    estimate_gamma,
    estimate_lambda,
    estimate_rho,
    estimate_sigma2,
    estimate_triplet,
    oracle_grid,
)
from .harness import ExperimentPlan, ExperimentResult, mise, reference_plan, run_experiment
from .kernels import (
    SpectralKernel,
    build_kernel_u,
    build_kernel_v,
    build_kernel_w,
    build_kernels,
    dirichlet_term,
    verify_moments,
)
from .model import (
    ClassParams,
    JumpDensity,
    LevyTriplet,
    char_fn_f,
    char_fn_X,
    check_class_membership,
    levy_density,
)
from .simulate import IncrementSample, sample_jump, simulate_increments

__version__ = "0.1.0"
