"""Newton solvers for the stationarity and constrained KKT systems.

Two bordered systems are solved:

* fixed beta: unknowns (q, lambda), equations
    grad G + beta grad I + lambda_k = 0,   sum_nu q_{nu k} = 1;
* fixed information level I0: unknowns (q, beta, lambda), with the extra
    equation I(X;Y_N)(q) = I0.

Both use damped Newton steps with a fraction-to-boundary rule keeping q
strictly positive, and fall back to Levenberg regularization when the
Jacobian is near singular (which happens close to symmetry-breaking
points, where the projected Hessian has eigenvalues near zero).
"""

from __future__ import annotations

import numpy as np

from .information import (
    JointDistribution,
    ObjectiveKind,
    grad_information,
    grad_objective,
    hessian_annealed,
    hessian_information,
    hessian_objective,
    mutual_information_xyn,
    uniform_quantizer,
)

# Smallest quantizer entry the solvers will step to.
Q_MIN = 1e-13


def constraint_matrix(n_classes: int, n_symbols: int) -> np.ndarray:
    """Jacobian of the column-sum constraints, shape (K, N*K)."""
    C = np.zeros((n_symbols, n_classes * n_symbols))
    for k in range(n_symbols):
        C[k, k::n_symbols] = 1.0
    return C


def stationarity_residual(
    kind: ObjectiveKind,
    p: JointDistribution,
    q: np.ndarray,
    beta: float,
    lam: np.ndarray,
) -> np.ndarray:
    """grad G + beta grad I + lambda, as an (N, K) array."""
    return grad_objective(kind, p, q) + beta * grad_information(p, q) + lam[None, :]


def least_squares_multipliers(
    kind: ObjectiveKind, p: JointDistribution, q: np.ndarray, beta: float
) -> np.ndarray:
    """Multipliers recovered row-wise from the stationarity equation.

    For each symbol k, the value of lambda_k minimizing the squared
    stationarity residual of column k; exact at stationary points.
    """
    g = grad_objective(kind, p, q) + beta * grad_information(p, q)
    return -g.mean(axis=0)


class _NewtonFailure(Exception):
    pass


def _damped_update(z, dz, q_slice, residual_fn, nr, max_halvings=30):
    """Backtracking step with positivity of the quantizer block preserved."""
    dq = dz[q_slice]
    qcur = z[q_slice]
    alpha = 1.0
    neg = dq < 0
    if np.any(neg):
        alpha = min(1.0, 0.995 * np.min((qcur[neg] - Q_MIN) / -dq[neg]))
    if alpha <= 0:
        raise _NewtonFailure
    a = alpha
    for _ in range(max_halvings):
        zn = z + a * dz
        if zn[q_slice].min() >= Q_MIN:
            rn = residual_fn(zn)
            if np.linalg.norm(rn) < nr:
                return zn, rn
        a *= 0.5
    raise _NewtonFailure


def solve_stationary(
    kind: ObjectiveKind,
    p: JointDistribution,
    q0: np.ndarray,
    beta: float,
    tol: float = 1e-12,
    max_iter: int = 80,
) -> tuple[np.ndarray, np.ndarray, float, bool]:
    """Newton solve of the fixed-beta stationarity system.

    Returns (q, lam, residual_norm, converged). The returned q is
    column-stochastic up to the solver tolerance.
    """
    n_classes, n_symbols = q0.shape
    NK = n_classes * n_symbols
    C = constraint_matrix(n_classes, n_symbols)

    def residual(z):
        q = z[:NK].reshape(n_classes, n_symbols)
        lam = z[NK:]
        r1 = stationarity_residual(kind, p, q, beta, lam).reshape(NK)
        r2 = q.sum(axis=0) - 1.0
        return np.concatenate([r1, r2])

    q = np.clip(q0, Q_MIN * 10, None)
    lam = least_squares_multipliers(kind, p, q, beta)
    z = np.concatenate([q.reshape(NK), lam])
    r = residual(z)
    mu = 0.0
    for _ in range(max_iter):
        nr = np.linalg.norm(r)
        if nr < tol:
            break
        q = z[:NK].reshape(n_classes, n_symbols)
        J = np.zeros((NK + n_symbols, NK + n_symbols))
        J[:NK, :NK] = hessian_annealed(kind, p, q, beta)
        J[:NK, NK:] = C.T
        J[NK:, :NK] = C
        try:
            if mu > 0:
                dz = np.linalg.solve(J.T @ J + mu * np.eye(J.shape[0]), -J.T @ r)
            else:
                dz = np.linalg.solve(J, -r)
            z, r = _damped_update(z, dz, slice(0, NK), residual, nr)
            mu = 0.0
        except (np.linalg.LinAlgError, _NewtonFailure):
            mu = 1e-8 * max(1.0, float(np.abs(J).max())) if mu == 0.0 else mu * 100
            if mu > 1e24:
                break
    nr = float(np.linalg.norm(r))
    q = z[:NK].reshape(n_classes, n_symbols)
    return q, z[NK:], nr, nr < tol


def solve_kkt_constrained(
    kind: ObjectiveKind,
    p: JointDistribution,
    q0: np.ndarray,
    beta0: float,
    i0: float,
    tol: float = 1e-12,
    max_iter: int = 120,
) -> tuple[np.ndarray, float, np.ndarray, float, bool]:
    """Newton solve of the extended KKT system at fixed I(X;Y_N) = i0.

    Unknowns are (q, beta, lambda); returns
    (q, beta, lam, residual_norm, converged).
    """
    n_classes, n_symbols = q0.shape
    NK = n_classes * n_symbols
    C = constraint_matrix(n_classes, n_symbols)

    def residual(z):
        q = z[:NK].reshape(n_classes, n_symbols)
        beta, lam = z[NK], z[NK + 1:]
        r1 = stationarity_residual(kind, p, q, beta, lam).reshape(NK)
        r2 = np.array([mutual_information_xyn(p, q) - i0])
        r3 = q.sum(axis=0) - 1.0
        return np.concatenate([r1, r2, r3])

    q = np.clip(q0, Q_MIN * 10, None)
    lam = least_squares_multipliers(kind, p, q, beta0)
    z = np.concatenate([q.reshape(NK), [beta0], lam])
    r = residual(z)
    mu = 0.0
    for _ in range(max_iter):
        nr = np.linalg.norm(r)
        if nr < tol:
            break
        q = z[:NK].reshape(n_classes, n_symbols)
        beta = z[NK]
        gI = grad_information(p, q).reshape(NK)
        n = NK + 1 + n_symbols
        J = np.zeros((n, n))
        J[:NK, :NK] = hessian_annealed(kind, p, q, beta)
        J[:NK, NK] = gI
        J[:NK, NK + 1:] = C.T
        J[NK, :NK] = gI
        J[NK + 1:, :NK] = C
        try:
            if mu > 0:
                dz = np.linalg.solve(J.T @ J + mu * np.eye(n), -J.T @ r)
            else:
                dz = np.linalg.solve(J, -r)
            z, r = _damped_update(z, dz, slice(0, NK), residual, nr)
            mu = 0.0
        except (np.linalg.LinAlgError, _NewtonFailure):
            mu = 1e-8 * max(1.0, float(np.abs(J).max())) if mu == 0.0 else mu * 100
            if mu > 1e24:
                break
    nr = float(np.linalg.norm(r))
    q = z[:NK].reshape(n_classes, n_symbols)
    return q, float(z[NK]), z[NK + 1:], nr, nr < tol


def uniform_branch_crossing(
    kind: ObjectiveKind, p: JointDistribution, n_classes: int
) -> tuple[float, np.ndarray]:
    """Beta and direction of the first eigenvalue crossing at the uniform quantizer.

    Solves the generalized eigenproblem of the kernel-projected Hessian
    pencil  H_G + beta H_I: the smallest beta at which the penalized
    Hessian stops being negative definite on the normalization kernel,
    together with the crossing direction (returned in quantizer shape,
    unit Frobenius norm).

    Directions on which both forms vanish (present for the bottleneck
    objective, where class-mass shifts leave everything unchanged to
    second order) are deflated before solving.
    """
    from .spectral import kernel_basis  # local import to avoid a module cycle

    if n_classes < 2:
        raise ValueError("need at least 2 classes for a symmetry-breaking crossing")
    K = p.n_symbols
    q = uniform_quantizer(n_classes, K)
    B = kernel_basis(K, n_classes).matrix
    A = -(B.T @ hessian_objective(kind, p, q) @ B)
    Cm = B.T @ hessian_information(p, q) @ B
    A = 0.5 * (A + A.T)
    Cm = 0.5 * (Cm + Cm.T)
    # deflate the common null space of the pencil
    w, V = np.linalg.eigh(A)
    keep = w > max(1e-12, 1e-12 * w.max())
    if not np.any(keep):
        raise ValueError("objective Hessian vanishes on the whole kernel")
    Vk = V[:, keep]
    Ak = np.diag(w[keep])
    Ck = Vk.T @ Cm @ Vk
    L = np.sqrt(w[keep])
    M = Ck / np.outer(L, L)
    M = 0.5 * (M + M.T)
    ev, U = np.linalg.eigh(M)
    theta = float(ev[-1])
    if theta <= 0:
        raise ValueError("information Hessian is zero on the kernel; no crossing")
    u = Vk @ (U[:, -1] / L)
    v = (B @ u).reshape(n_classes, K)
    v /= np.linalg.norm(v)
    return 1.0 / theta, v
