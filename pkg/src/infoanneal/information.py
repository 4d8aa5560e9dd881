"""Discrete information functionals, gradients and Hessians.

Problem data is a joint distribution p(X, Y) over finite alphabets
(`JointDistribution`). The optimization variable is a column-stochastic
quantizer q(Y_N = nu | Y = y_k), stored as an (n_classes, n_symbols)
array. All information quantities are in nats.

Two objectives are supported (`ObjectiveKind`):

* information distortion, G(q) = H(Y_N | Y);
* information bottleneck,  G(q) = -I(Y; Y_N).

Both are maximized subject to retaining information about X,
I(X; Y_N) >= I0, which an annealing parameter beta prices into the
penalized functional G(q) + beta * I(X; Y_N).

Conventions used throughout the package:

* quantizer entries are clamped to ``PROB_FLOOR`` inside logarithms and
  denominators; 0 * log 0 is evaluated as 0;
* Hessians are returned in flattened coordinates with index
  ``nu * n_symbols + k`` (class-major), which makes the I(X;Y_N) part
  block-diagonal: one (K x K) block per class nu;
* gradients are plain (n_classes, n_symbols) arrays with no constraint
  projection applied. Projection onto the simplex kernel happens in the
  spectral module.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from ._validation import check_joint_matrix, check_pair, check_quantizer

# Probability floor inside logarithms and denominators; keeps every
# functional finite on the boundary of the simplex.
PROB_FLOOR = 1e-15


class ObjectiveKind(Enum):
    """Which concave objective the annealer maximizes."""

    INFORMATION_DISTORTION = "information-distortion"
    INFORMATION_BOTTLENECK = "information-bottleneck"

    @classmethod
    def from_string(cls, name: str) -> "ObjectiveKind":
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "id": cls.INFORMATION_DISTORTION,
            "information-distortion": cls.INFORMATION_DISTORTION,
            "distortion": cls.INFORMATION_DISTORTION,
            "ib": cls.INFORMATION_BOTTLENECK,
            "information-bottleneck": cls.INFORMATION_BOTTLENECK,
            "bottleneck": cls.INFORMATION_BOTTLENECK,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown objective {name!r}; use one of {sorted(aliases)}")


class JointDistribution:
    """Fixed problem data: discrete joint p(X, Y) with cached marginals.

    Parameters
    ----------
    pxy : array-like, shape (n_inputs, n_symbols)
        Joint probability mass; must sum to 1 and have strictly positive
        column marginals.

    Attributes
    ----------
    pxy : ndarray - the validated joint matrix.
    px, py : ndarray - marginals of X and Y (py is the vector p_k).
    mutual_information : float - I(X; Y) in nats; upper bound for
        I(X; Y_N) of any quantizer.
    """

    def __init__(self, pxy):
        self.pxy = check_joint_matrix(pxy)
        self.px = self.pxy.sum(axis=1)
        self.py = self.pxy.sum(axis=0)
        ratio = self.pxy / np.clip(np.outer(self.px, self.py), PROB_FLOOR, None)
        self.mutual_information = float(
            np.sum(np.where(self.pxy > 0, self.pxy * _safe_log(ratio), 0.0))
        )

    @property
    def n_inputs(self) -> int:
        return self.pxy.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.pxy.shape[1]

    def __repr__(self) -> str:
        return (
            f"JointDistribution(n_inputs={self.n_inputs}, "
            f"n_symbols={self.n_symbols}, I(X;Y)={self.mutual_information:.6f})"
        )


def _safe_log(a: np.ndarray) -> np.ndarray:
    return np.log(np.clip(a, PROB_FLOOR, None))


def _xlogx(a: np.ndarray) -> np.ndarray:
    return np.where(a > 0, a * _safe_log(a), 0.0)


def uniform_quantizer(n_classes: int, n_symbols: int) -> np.ndarray:
    """The quantizer assigning every symbol equally to all classes."""
    if n_classes < 1:
        raise ValueError("n_classes must be >= 1")
    return np.full((n_classes, n_symbols), 1.0 / n_classes)


def induced_joint(p: JointDistribution, q: np.ndarray):
    """Induced joint p(x, nu) = sum_k p(x, y_k) q_{nu k} and marginal p(nu)."""
    pxn = p.pxy @ q.T
    pn = q @ p.py
    return pxn, pn


def mutual_information_xyn(p: JointDistribution, q: np.ndarray) -> float:
    """I(X; Y_N) of the quantized channel, in nats.

    Computed from the induced joint; lies in [0, I(X;Y)] for stochastic q
    (tiny negative round-off is clipped to 0).
    """
    check_pair(p, q)
    pxn, pn = induced_joint(p, q)
    ratio = pxn / np.clip(p.px[:, None] * pn[None, :], PROB_FLOOR, None)
    val = float(np.sum(np.where(pxn > 0, pxn * _safe_log(ratio), 0.0)))
    if -1e-12 < val < 0.0:
        val = 0.0
    return val


def conditional_entropy_yn_given_y(p: JointDistribution, q: np.ndarray) -> float:
    """H(Y_N | Y) = -sum_k p_k sum_nu q_{nu k} ln q_{nu k}, in [0, ln N]."""
    check_pair(p, q)
    return float(-np.sum(p.py[None, :] * _xlogx(q)))


def entropy_yn(p: JointDistribution, q: np.ndarray) -> float:
    """H(Y_N) of the induced class marginal."""
    check_pair(p, q)
    pn = q @ p.py
    return float(-np.sum(_xlogx(pn)))


def mutual_information_yyn(p: JointDistribution, q: np.ndarray) -> float:
    """I(Y; Y_N) = H(Y_N) - H(Y_N|Y), the compression rate, in nats."""
    val = entropy_yn(p, q) - conditional_entropy_yn_given_y(p, q)
    if -1e-12 < val < 0.0:
        val = 0.0
    return val


def objective_value(kind: ObjectiveKind, p: JointDistribution, q: np.ndarray) -> float:
    """G(q): H(Y_N|Y) for distortion, -I(Y;Y_N) for bottleneck."""
    if kind is ObjectiveKind.INFORMATION_DISTORTION:
        return conditional_entropy_yn_given_y(p, q)
    return -mutual_information_yyn(p, q)


def grad_information(p: JointDistribution, q: np.ndarray) -> np.ndarray:
    """Gradient of I(X; Y_N) with respect to q.

    (grad I)_{nu k} = sum_i p(x_i, y_k) ln( p(x_i, nu) / (p(x_i) p(nu)) ).

    Satisfies the Euler identity sum q_{nu k} (grad I)_{nu k} = I(X;Y_N)
    for any positive q (the formula does not use column normalization).
    """
    check_pair(p, q)
    pxn, pn = induced_joint(p, q)
    L = _safe_log(pxn) - _safe_log(p.px)[:, None] - _safe_log(pn)[None, :]
    return L.T @ p.pxy


def grad_conditional_entropy(p: JointDistribution, q: np.ndarray) -> np.ndarray:
    """Gradient of H(Y_N|Y): entry (nu, k) is -p_k (ln q_{nu k} + 1)."""
    check_pair(p, q)
    return -p.py[None, :] * (_safe_log(q) + 1.0)


def grad_neg_mutual_information_yyn(p: JointDistribution, q: np.ndarray) -> np.ndarray:
    """Gradient of -I(Y;Y_N): entry (nu, k) is p_k ln( p(nu) / q_{nu k} )."""
    check_pair(p, q)
    pn = q @ p.py
    return p.py[None, :] * (_safe_log(pn)[:, None] - _safe_log(q))


def grad_objective(kind: ObjectiveKind, p: JointDistribution, q: np.ndarray) -> np.ndarray:
    """Gradient of G(q) for the selected objective."""
    if kind is ObjectiveKind.INFORMATION_DISTORTION:
        return grad_conditional_entropy(p, q)
    return grad_neg_mutual_information_yyn(p, q)


def hessian_information(p: JointDistribution, q: np.ndarray) -> np.ndarray:
    """Hessian of I(X; Y_N), block-diagonal across classes.

    Block nu is  P^T diag(1 / p(x, nu)) P - p_Y p_Y^T / p(nu)  where P is
    the joint matrix. Flattened index is nu * n_symbols + k.
    """
    check_pair(p, q)
    pxn, pn = induced_joint(p, q)
    n_classes, n_symbols = q.shape
    H = np.zeros((n_classes * n_symbols, n_classes * n_symbols))
    pypy = np.outer(p.py, p.py)
    for nu in range(n_classes):
        w = 1.0 / np.clip(pxn[:, nu], PROB_FLOOR, None)
        block = (p.pxy * w[:, None]).T @ p.pxy - pypy / max(pn[nu], PROB_FLOOR)
        s = slice(nu * n_symbols, (nu + 1) * n_symbols)
        H[s, s] = block
    return H


def hessian_objective(kind: ObjectiveKind, p: JointDistribution, q: np.ndarray) -> np.ndarray:
    """Hessian of G(q), block-diagonal across classes (flattened class-major)."""
    check_pair(p, q)
    n_classes, n_symbols = q.shape
    NK = n_classes * n_symbols
    if kind is ObjectiveKind.INFORMATION_DISTORTION:
        diag = -(p.py[None, :] / np.clip(q, PROB_FLOOR, None)).reshape(NK)
        return np.diag(diag)
    pn = q @ p.py
    H = np.zeros((NK, NK))
    pypy = np.outer(p.py, p.py)
    for nu in range(n_classes):
        block = pypy / max(pn[nu], PROB_FLOOR) - np.diag(
            p.py / np.clip(q[nu], PROB_FLOOR, None)
        )
        s = slice(nu * n_symbols, (nu + 1) * n_symbols)
        H[s, s] = block
    return H


def hessian_annealed(
    kind: ObjectiveKind, p: JointDistribution, q: np.ndarray, beta: float
) -> np.ndarray:
    """Hessian of the penalized functional G(q) + beta * I(X; Y_N)."""
    return hessian_objective(kind, p, q) + beta * hessian_information(p, q)


def annealed_value(kind: ObjectiveKind, p: JointDistribution, q: np.ndarray, beta: float) -> float:
    """Value of G(q) + beta * I(X; Y_N)."""
    return objective_value(kind, p, q) + beta * mutual_information_xyn(p, q)


def random_joint(rng: np.random.Generator, n_inputs: int, n_symbols: int) -> JointDistribution:
    """A strictly positive random joint distribution (for tests and suites)."""
    m = rng.random((n_inputs, n_symbols)) + 0.05
    return JointDistribution(m / m.sum())


def random_quantizer(rng: np.random.Generator, n_classes: int, n_symbols: int) -> np.ndarray:
    """A strictly positive random column-stochastic quantizer."""
    q = rng.random((n_classes, n_symbols)) + 0.05
    return q / q.sum(axis=0, keepdims=True)
