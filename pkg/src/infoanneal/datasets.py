"""Synthetic joint distributions on a 2-D grid.

The standard benchmark is a mixture of four Gaussians evaluated at the
cell centers of a K_X x K grid over the unit square and normalized to a
joint p(X, Y): rows index the X axis, columns the Y axis.

The default component layout places the four modes along the diagonal
with unequal masses. The asymmetric masses matter: with exactly equal,
mirror-symmetric components the leading symmetry-breaking transition of
the distortion annealer is continuous, while the asymmetry makes it
first order (a subcritical branch with a nearby fold), which is the
regime the curve and bifurcation tooling is designed to exhibit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DataFormatError
from .information import JointDistribution

DEFAULT_MEANS = ((0.2, 0.2), (0.4, 0.4), (0.6, 0.6), (0.8, 0.8))
DEFAULT_SIGMA = 0.1
DEFAULT_WEIGHTS = (0.30, 0.27, 0.23, 0.20)
DEFAULT_GRID = (52, 52)


def _isotropic(sigma: float, n: int) -> tuple:
    cov = ((sigma * sigma, 0.0), (0.0, sigma * sigma))
    return tuple(cov for _ in range(n))


@dataclass(frozen=True)
class GaussianMixtureSpec:
    """Mixture parameters, all in grid units (the unit square).

    ``rng_seed`` is only consumed when ``jitter`` is positive, in which
    case component means are perturbed by centered Gaussian noise of that
    standard deviation before evaluation.
    """

    means: tuple = DEFAULT_MEANS
    covariances: tuple = field(default_factory=lambda: _isotropic(DEFAULT_SIGMA, 4))
    weights: tuple = DEFAULT_WEIGHTS
    grid_shape: tuple[int, int] = DEFAULT_GRID
    rng_seed: int = 0
    jitter: float = 0.0

    def __post_init__(self):
        n = len(self.means)
        if n < 1:
            raise DataFormatError("mixture needs at least one component")
        if len(self.covariances) != n or len(self.weights) != n:
            raise DataFormatError("means, covariances and weights must have equal length")
        w = np.asarray(self.weights, dtype=float)
        if np.any(w <= 0):
            raise DataFormatError("component weights must be strictly positive")
        if abs(float(w.sum()) - 1.0) > 1e-9:
            raise DataFormatError(f"component weights sum to {float(w.sum())!r}, expected 1")
        for c in self.covariances:
            cov = np.asarray(c, dtype=float)
            if cov.shape != (2, 2) or abs(cov[0, 1] - cov[1, 0]) > 1e-12:
                raise DataFormatError("covariances must be symmetric 2x2 matrices")
            try:
                np.linalg.cholesky(cov)
            except np.linalg.LinAlgError:
                raise DataFormatError("degenerate covariance (not positive definite)")
        if self.grid_shape[0] < 2 or self.grid_shape[1] < 2:
            raise DataFormatError("grid must be at least 2x2")

    @classmethod
    def default(cls) -> "GaussianMixtureSpec":
        return cls()

    @classmethod
    def diagonal(cls, n_components: int, sigma: float = DEFAULT_SIGMA,
                 grid_shape: tuple[int, int] = DEFAULT_GRID) -> "GaussianMixtureSpec":
        """`n` equally weighted isotropic components spread along the diagonal."""
        if n_components < 1:
            raise DataFormatError("mixture needs at least one component")
        centers = tuple(
            ((2 * i + 1) / (2 * n_components),) * 2 for i in range(n_components)
        )
        weights = tuple(1.0 / n_components for _ in range(n_components))
        return cls(means=centers, covariances=_isotropic(sigma, n_components),
                   weights=weights, grid_shape=grid_shape)


def gaussian_mixture_joint(spec: GaussianMixtureSpec) -> JointDistribution:
    """Evaluate the mixture density at grid cell centers and normalize.

    Deterministic for a given spec (the seed only matters with jitter
    enabled). Cell centers are at ((i + 1/2)/K_X, (k + 1/2)/K).
    """
    kx, ky = spec.grid_shape
    xs = (np.arange(kx) + 0.5) / kx
    ys = (np.arange(ky) + 0.5) / ky
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    means = np.asarray(spec.means, dtype=float)
    if spec.jitter > 0:
        rng = np.random.default_rng(spec.rng_seed)
        means = means + spec.jitter * rng.standard_normal(means.shape)
    density = np.zeros((kx, ky))
    for mean, cov, w in zip(means, spec.covariances, spec.weights):
        cov = np.asarray(cov, dtype=float)
        inv = np.linalg.inv(cov)
        dx = X - mean[0]
        dy = Y - mean[1]
        quad = inv[0, 0] * dx * dx + 2 * inv[0, 1] * dx * dy + inv[1, 1] * dy * dy
        norm = 1.0 / (2 * np.pi * np.sqrt(np.linalg.det(cov)))
        density += w * norm * np.exp(-0.5 * quad)
    return JointDistribution(density / density.sum())


def four_gaussian_joint(spec: GaussianMixtureSpec | None = None) -> JointDistribution:
    """The default four-component benchmark joint distribution."""
    return gaussian_mixture_joint(spec or GaussianMixtureSpec.default())


def two_cluster_joint(grid: int = 12, sigma: float = 0.12) -> JointDistribution:
    """A small two-mode instance with a single symmetry-breaking transition."""
    spec = GaussianMixtureSpec(
        means=((0.3, 0.3), (0.7, 0.7)),
        covariances=_isotropic(sigma, 2),
        weights=(0.5, 0.5),
        grid_shape=(grid, grid),
    )
    return gaussian_mixture_joint(spec)
