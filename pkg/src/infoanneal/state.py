"""Record types shared by the annealing, spectral and curve modules."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class SpectralClassification:
    """Kernel-projected Hessian test results at a stationary point.

    ``eig_lagrangian`` are the eigenvalues of the Hessian projected onto
    the kernel of the normalization constraints (sorted descending);
    ``eig_constrained`` additionally restricts to directions orthogonal
    to the information-constraint gradient, and is None when that
    gradient vanishes (degenerate at the uniform quantizer).

    ``solves_lagrangian`` / ``solves_constrained`` are True when the
    corresponding largest eigenvalue is below -tol_eig, i.e. the point
    passes the sufficient condition for being a maximizer of the
    penalized problem / the constrained problem.
    """

    eig_lagrangian: np.ndarray
    eig_constrained: np.ndarray | None
    solves_lagrangian: bool
    solves_constrained: bool | None
    tol_eig: float

    @property
    def margin_lagrangian(self) -> float | None:
        if self.eig_lagrangian.size == 0:
            return None
        return float(self.eig_lagrangian[0])

    @property
    def margin_constrained(self) -> float | None:
        if self.eig_constrained is None or self.eig_constrained.size == 0:
            return None
        return float(self.eig_constrained[0])

    @property
    def label(self) -> str:
        """'lagrangian_solution', 'constrained_solution' or 'indeterminate'.

        The tests are sufficient conditions only, so a point failing both
        is never labeled a non-solution.
        """
        if self.solves_lagrangian:
            return "lagrangian_solution"
        if self.solves_constrained:
            return "constrained_solution"
        return "indeterminate"


@dataclass
class StationaryPoint:
    """A quantizer at which the penalized Lagrangian gradient vanishes."""

    q: np.ndarray
    beta: float
    lam: np.ndarray
    kkt_residual: float
    objective_value: float
    constraint_value: float
    converged: bool = True
    classification: SpectralClassification | None = None


@dataclass(frozen=True)
class AnnealSchedule:
    """Parameters of the beta continuation.

    ``step`` is the initial beta increment; on solver failure it is halved
    down to ``step_min`` and grown back after successes. After a branch
    break the increment restarts at ``step * ramp_init`` and ramps back up,
    which keeps the sampling fine where new branches start. ``perturbation``
    is the size of the seeded random tangent kick applied before re-solving
    at each new beta, which lets symmetry-broken branches become reachable.
    """

    beta_start: float = 0.0
    beta_max: float = 2.0
    step: float = 0.02
    step_min: float = 1e-7
    perturbation: float = 1e-4
    max_fixed_point_iters: int = 5000
    convergence_tol: float = 1e-10
    rng_seed: int = 0
    ramp_init: float = 2.5e-3
    ramp_growth: float = 1.15
    jump_tol: float = 0.05

    def __post_init__(self):
        if not 0 <= self.beta_start < self.beta_max:
            raise ValueError("need 0 <= beta_start < beta_max")
        if not self.step > self.step_min > 0:
            raise ValueError("need step > step_min > 0")
        if self.perturbation < 0:
            raise ValueError("perturbation must be >= 0")
        if self.convergence_tol <= 0 or self.max_fixed_point_iters < 1:
            raise ValueError("tolerances must be positive")
        if not 0 < self.ramp_init <= 1 or self.ramp_growth <= 1:
            raise ValueError("need 0 < ramp_init <= 1 and ramp_growth > 1")


@dataclass
class Branch:
    """A beta-ordered run of stationary points sharing a symmetry class.

    ``provenance`` is one of 'uniform_root', 'pitchfork_child' or
    'constrained_recovery'. ``signature`` is the partition of classes into
    equality groups (sorted group sizes), which is invariant under class
    relabeling.
    """

    branch_id: int
    provenance: str
    points: list[StationaryPoint] = field(default_factory=list)
    signature: tuple[int, ...] = ()

    @property
    def betas(self) -> np.ndarray:
        return np.array([sp.beta for sp in self.points])

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class BifurcationEvent:
    """A detected qualitative change along a branch.

    ``kind`` is 'pitchfork_like' (a symmetry-breaking eigenvalue crossing)
    or 'saddle_node' (beta reverses direction along the branch arc).
    ``eigenvector`` is the crossing direction reshaped to quantizer shape.
    """

    beta: float
    kind: str
    eigenvector: np.ndarray | None
    parent_branch: int
    child_branches: list[int] = field(default_factory=list)


@dataclass
class AnnealResult:
    """Branches discovered by a beta sweep, plus detected events."""

    branches: list[Branch]
    events: list[BifurcationEvent]

    def all_points(self) -> list[StationaryPoint]:
        return [sp for br in self.branches for sp in br.points]


@dataclass
class CurvePoint:
    """One point of the relevance-compression curve R(I0)."""

    i0: float
    value: float
    beta: float
    branch_id: int
    kkt_residual: float
    q: np.ndarray
    lam: np.ndarray
    classification: SpectralClassification | None = None


@dataclass(frozen=True)
class CurveSpec:
    """Parameters of a relevance-compression curve sweep."""

    i0_min: float
    i0_max: float
    n_points: int
    n_classes: int
    newton_tol: float = 1e-12
    active_tol: float = 1e-8
    mono_tol: float = 1e-6
    restarts: int = 8
    rng_seed: int = 0

    def __post_init__(self):
        if not 0 < self.i0_min < self.i0_max:
            raise ValueError("need 0 < i0_min < i0_max")
        if self.n_points < 2:
            raise ValueError("need at least 2 curve points")
        if self.n_classes < 1:
            raise ValueError("n_classes must be >= 1")

    def grid(self) -> np.ndarray:
        return np.linspace(self.i0_min, self.i0_max, self.n_points)


@dataclass
class CurveDerivativeReport:
    """Finite-difference verification of dR/dI0 = -beta along a curve.

    ``slope_max_rel_err`` is max over checked interior points of
    |dR/dI0 + beta| / max(beta, 1e-6); ``curvature_max_rel_err`` compares
    d^2R/dI0^2 against -dbeta/dI0. ``sign_changes`` lists I0 values where
    dbeta/dI0 changes sign (evidence of a convexity change in R).
    """

    slope_max_rel_err: float
    curvature_max_rel_err: float
    sign_changes: list[float]
    n_points_checked: int
    segments: list[tuple[int, int]]
