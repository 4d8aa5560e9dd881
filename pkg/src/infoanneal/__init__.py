"""Deterministic annealing for discrete information-constrained quantization.

Solves the information distortion and information bottleneck problems
over finite alphabets, tracks the bifurcation structure of their
stationary points along the annealing parameter, and computes the
relevance-compression curve R(I0) with numerical verification of the
slope identity dR/dI0 = -beta.
"""

from .annealing import (
    AnnealResult,
    anneal,
    fixed_point_update,
    kkt_residual_norm,
    lagrange_multipliers,
    multiplier_sum,
    solve_at_beta,
)
from .curve import (
    beta_of_i0,
    build_curve,
    classify_curve,
    derivative_report,
    information_ceiling,
    recovered_branches,
    solve_constrained,
)
from .datasets import (
    GaussianMixtureSpec,
    four_gaussian_joint,
    gaussian_mixture_joint,
    two_cluster_joint,
)
from .estimators import AnnealedQuantizer, RelevanceCompressionCurve
from .exceptions import (
    DataFormatError,
    DegenerateKernelError,
    DimensionMismatchError,
    InfeasibleTargetError,
    InfoAnnealError,
    NonConvergenceError,
)
from .information import (
    JointDistribution,
    ObjectiveKind,
    conditional_entropy_yn_given_y,
    grad_conditional_entropy,
    grad_information,
    grad_neg_mutual_information_yyn,
    grad_objective,
    hessian_annealed,
    hessian_information,
    hessian_objective,
    mutual_information_xyn,
    mutual_information_yyn,
    objective_value,
    uniform_quantizer,
)
from .io import load_joint, save_joint
from .newton import (
    solve_kkt_constrained,
    solve_stationary,
    uniform_branch_crossing,
)
from .spectral import (
    KernelBasis,
    canonical_form,
    class_partition,
    classify_quantizer,
    classify_stationary_point,
    detect_bifurcations,
    kernel_basis,
)
from .state import (
    AnnealSchedule,
    BifurcationEvent,
    Branch,
    CurveDerivativeReport,
    CurvePoint,
    CurveSpec,
    SpectralClassification,
    StationaryPoint,
)

__version__ = "0.1.0"

__all__ = [
    "AnnealResult",
    "AnnealSchedule",
    "AnnealedQuantizer",
    "BifurcationEvent",
    "Branch",
    "CurveDerivativeReport",
    "CurvePoint",
    "CurveSpec",
    "DataFormatError",
    "DegenerateKernelError",
    "DimensionMismatchError",
    "GaussianMixtureSpec",
    "InfeasibleTargetError",
    "InfoAnnealError",
    "JointDistribution",
    "KernelBasis",
    "NonConvergenceError",
    "ObjectiveKind",
    "RelevanceCompressionCurve",
    "SpectralClassification",
    "StationaryPoint",
    "anneal",
    "beta_of_i0",
    "build_curve",
    "canonical_form",
    "class_partition",
    "classify_curve",
    "classify_quantizer",
    "classify_stationary_point",
    "conditional_entropy_yn_given_y",
    "derivative_report",
    "detect_bifurcations",
    "fixed_point_update",
    "four_gaussian_joint",
    "gaussian_mixture_joint",
    "grad_conditional_entropy",
    "grad_information",
    "grad_neg_mutual_information_yyn",
    "grad_objective",
    "hessian_annealed",
    "hessian_information",
    "hessian_objective",
    "information_ceiling",
    "kernel_basis",
    "kkt_residual_norm",
    "lagrange_multipliers",
    "load_joint",
    "multiplier_sum",
    "mutual_information_xyn",
    "mutual_information_yyn",
    "objective_value",
    "recovered_branches",
    "save_joint",
    "solve_at_beta",
    "solve_constrained",
    "solve_kkt_constrained",
    "solve_stationary",
    "two_cluster_joint",
    "uniform_branch_crossing",
    "uniform_quantizer",
]
