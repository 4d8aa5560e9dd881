"""Scikit-learn style estimators wrapping the annealer and the curve builder.

Both estimators accept the joint distribution matrix p(X, Y) as ``X`` in
``fit`` (shape (n_inputs, n_symbols), or a JointDistribution), expose
their configuration through ``get_params``/``set_params``, and so compose
with scikit-learn tooling such as ``clone``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .annealing import anneal
from .curve import (
    beta_of_i0,
    build_curve,
    classify_curve,
    derivative_report,
    information_ceiling,
)
from .information import JointDistribution, ObjectiveKind
from .state import AnnealSchedule, CurveSpec


def _as_joint(X) -> JointDistribution:
    if isinstance(X, JointDistribution):
        return X
    return JointDistribution(np.asarray(X, dtype=float))


class AnnealedQuantizer(BaseEstimator):
    """Soft clustering of the Y alphabet by deterministic annealing.

    Fitting sweeps the annealing parameter upward from the uniform
    quantizer and keeps the final stationary quantizer together with the
    full branch and bifurcation structure.

    Parameters
    ----------
    n_classes : int, number of quantizer classes.
    objective : 'information-distortion' or 'information-bottleneck'.
    beta_max : float, end of the annealing sweep.
    step : float, initial beta increment.
    perturbation : float, tangent kick size applied before each re-solve.
    tol : float, fixed-point convergence tolerance (sup norm on q).
    random_state : int, seed for the perturbation directions.

    Attributes (after fit)
    ----------
    quantizer_ : ndarray (n_classes, n_symbols), the final quantizer.
    branches_ : list of Branch, the discovered solution branches.
    bifurcations_ : list of BifurcationEvent.
    labels_ : ndarray (n_symbols,), hard class of each symbol.
    joint_ : the fitted JointDistribution.
    """

    def __init__(
        self,
        n_classes: int = 2,
        objective: str = "information-distortion",
        beta_max: float = 2.0,
        step: float = 0.02,
        perturbation: float = 1e-4,
        tol: float = 1e-10,
        random_state: int = 0,
    ):
        self.n_classes = n_classes
        self.objective = objective
        self.beta_max = beta_max
        self.step = step
        self.perturbation = perturbation
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y=None):
        p = _as_joint(X)
        kind = ObjectiveKind.from_string(self.objective)
        schedule = AnnealSchedule(
            beta_max=self.beta_max,
            step=self.step,
            perturbation=self.perturbation,
            convergence_tol=self.tol,
            rng_seed=self.random_state,
        )
        result = anneal(kind, p, self.n_classes, schedule)
        self.joint_ = p
        self.branches_ = result.branches
        self.bifurcations_ = result.events
        self.quantizer_ = result.branches[-1].points[-1].q
        self.labels_ = np.argmax(self.quantizer_, axis=0)
        return self

    def _check_fitted(self):
        if not hasattr(self, "quantizer_"):
            raise NotFittedError("this AnnealedQuantizer instance is not fitted yet")

    def transform(self, y_indices) -> np.ndarray:
        """Class membership probabilities for symbol indices, shape (len, n_classes)."""
        self._check_fitted()
        idx = np.asarray(y_indices, dtype=int)
        return self.quantizer_[:, idx].T

    def predict(self, y_indices) -> np.ndarray:
        """Hard class assignment for symbol indices."""
        self._check_fitted()
        idx = np.asarray(y_indices, dtype=int)
        return self.labels_[idx]

    def fit_predict(self, X, y=None) -> np.ndarray:
        self.fit(X)
        return self.labels_


class RelevanceCompressionCurve(BaseEstimator):
    """The curve R(I0): best attainable objective at each information level.

    Fitting sweeps I0 over [i0_min, i0_max] with fixed-I0 constrained
    solves and stores the curve, the multiplier trace beta(I0) and the
    derivative-identity report.

    Parameters
    ----------
    n_classes : int, quantizer classes.
    objective : 'information-distortion' or 'information-bottleneck'.
    i0_min, i0_max : float or None; None picks a range inside the
        attainable information ceiling (2 percent to 80 percent).
    n_points : int, number of I0 levels.
    restarts : int, multi-start budget per level.
    random_state : int, seed for restart perturbations.

    Attributes (after fit)
    ----------
    curve_ : list of CurvePoint.
    i0_, r_, beta_ : ndarrays of the swept levels, values and multipliers.
    report_ : CurveDerivativeReport.
    """

    def __init__(
        self,
        n_classes: int = 2,
        objective: str = "information-distortion",
        i0_min: float | None = None,
        i0_max: float | None = None,
        n_points: int = 30,
        restarts: int = 8,
        random_state: int = 0,
    ):
        self.n_classes = n_classes
        self.objective = objective
        self.i0_min = i0_min
        self.i0_max = i0_max
        self.n_points = n_points
        self.restarts = restarts
        self.random_state = random_state

    def fit(self, X, y=None):
        p = _as_joint(X)
        kind = ObjectiveKind.from_string(self.objective)
        ceiling = information_ceiling(p, self.n_classes)
        lo = self.i0_min if self.i0_min is not None else 0.02 * ceiling
        hi = self.i0_max if self.i0_max is not None else 0.80 * ceiling
        spec = CurveSpec(
            i0_min=lo,
            i0_max=hi,
            n_points=self.n_points,
            n_classes=self.n_classes,
            restarts=self.restarts,
            rng_seed=self.random_state,
        )
        curve = build_curve(spec, kind, p)
        classify_curve(curve, kind, p)
        self.joint_ = p
        self.curve_ = curve
        self.i0_ = np.array([cp.i0 for cp in curve])
        self.r_ = np.array([cp.value for cp in curve])
        self.beta_ = np.array([b for _, b in beta_of_i0(curve)])
        try:
            self.report_ = derivative_report(curve)
        except ValueError:
            self.report_ = None
        return self

    def _check_fitted(self):
        if not hasattr(self, "curve_"):
            raise NotFittedError(
                "this RelevanceCompressionCurve instance is not fitted yet"
            )

    def predict(self, i0_values) -> np.ndarray:
        """Interpolate R at the requested information levels."""
        self._check_fitted()
        return np.interp(np.asarray(i0_values, dtype=float), self.i0_, self.r_)
