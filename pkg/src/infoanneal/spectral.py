"""Kernel-projected Hessian tests and bifurcation detection.

A stationary point of the penalized problem is certified as a maximizer
when the Hessian of G + beta * I(X;Y_N) is negative definite on the
kernel of the normalization-constraint Jacobian [I_K I_K ... I_K]; it is
certified as a maximizer of the original constrained problem when the
same Hessian is negative definite on the smaller kernel that is also
orthogonal to the gradient of the information constraint. Points passing
only the second test are exactly the interesting ones: they sit on
subcritical branch segments that the beta annealer cannot reach.

Both conditions are sufficient, not necessary, so a point failing both is
reported as indeterminate rather than as a non-solution.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DegenerateKernelError
from .information import (
    JointDistribution,
    ObjectiveKind,
    grad_information,
    hessian_annealed,
)
from .newton import solve_stationary
from .state import (
    BifurcationEvent,
    Branch,
    SpectralClassification,
    StationaryPoint,
)

# Constraint gradients with norm below this are treated as vanishing.
DEGENERATE_GRAD_NORM = 1e-12
# Default eigenvalue tolerance: "negative definite" means below -TOL_EIG.
TOL_EIG = 1e-8


class KernelBasis:
    """Orthonormal basis of a constraint kernel, columns of shape (N*K, dim).

    ``constrained`` is False for the kernel of the column-sum Jacobian
    (dimension (N-1)*K) and True when the basis is additionally orthogonal
    to a constraint gradient (dimension (N-1)*K - 1).
    """

    def __init__(self, matrix: np.ndarray, n_classes: int, n_symbols: int, constrained: bool):
        self.matrix = matrix
        self.n_classes = n_classes
        self.n_symbols = n_symbols
        self.constrained = constrained

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


def _helmert_directions(n: int) -> np.ndarray:
    """(n-1) orthonormal vectors in R^n, each summing to zero."""
    rows = []
    for j in range(1, n):
        u = np.zeros(n)
        u[:j] = 1.0
        u[j] = -j
        rows.append(u / np.sqrt(j * (j + 1)))
    return np.array(rows)


def kernel_basis(
    n_symbols: int, n_classes: int, grad_constraint: np.ndarray | None = None
) -> KernelBasis:
    """Orthonormal basis of ker[I_K ... I_K], optionally also orthogonal to a gradient.

    The construction is deterministic: per-symbol Helmert directions in
    class space, then a Householder reflection to remove the component
    along the projected constraint gradient. Raises DegenerateKernelError
    when the projected gradient norm is below 1e-12 (uniform quantizer).
    """
    if n_classes < 1:
        raise ValueError("n_classes must be >= 1")
    NK = n_classes * n_symbols
    dim = (n_classes - 1) * n_symbols
    B = np.zeros((NK, dim))
    if n_classes > 1:
        U = _helmert_directions(n_classes)  # (N-1, N)
        col = 0
        for k in range(n_symbols):
            for j in range(n_classes - 1):
                B[k::n_symbols, col] = U[j]
                col += 1
    if grad_constraint is None:
        return KernelBasis(B, n_classes, n_symbols, constrained=False)
    g = B.T @ np.asarray(grad_constraint, dtype=float).reshape(NK)
    gn = np.linalg.norm(g)
    if gn < DEGENERATE_GRAD_NORM:
        raise DegenerateKernelError(
            f"constraint gradient has norm {gn:.3e} inside the kernel; "
            "the constrained kernel is not defined"
        )
    m = dim
    e1 = np.zeros(m)
    e1[0] = 1.0
    w = g / gn - e1
    wn = np.linalg.norm(w)
    if wn < 1e-14:
        Bc = B[:, 1:]
    else:
        w /= wn
        house = np.eye(m) - 2.0 * np.outer(w, w)
        Bc = B @ house[:, 1:]
    return KernelBasis(Bc, n_classes, n_symbols, constrained=True)


def projected_eigenvalues(H: np.ndarray, basis: KernelBasis) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors of B^T H B."""
    if basis.dim == 0:
        return np.array([]), np.zeros((basis.matrix.shape[0], 0))
    M = basis.matrix.T @ H @ basis.matrix
    M = 0.5 * (M + M.T)
    w, V = np.linalg.eigh(M)
    order = np.argsort(w)[::-1]
    return w[order], basis.matrix @ V[:, order]


def classify_quantizer(
    kind: ObjectiveKind,
    p: JointDistribution,
    q: np.ndarray,
    beta: float,
    tol_eig: float = TOL_EIG,
) -> SpectralClassification:
    """Run both kernel tests on an arbitrary (q, beta) pair."""
    n_classes, n_symbols = q.shape
    H = hessian_annealed(kind, p, q, beta)
    full = kernel_basis(n_symbols, n_classes)
    eig_l, _ = projected_eigenvalues(H, full)
    solves_l = bool(eig_l.size == 0 or eig_l[0] < -tol_eig)
    try:
        constrained = kernel_basis(n_symbols, n_classes, grad_information(p, q))
        eig_c, _ = projected_eigenvalues(H, constrained)
        solves_c: bool | None = bool(eig_c.size == 0 or eig_c[0] < -tol_eig)
    except DegenerateKernelError:
        eig_c, solves_c = None, None
    return SpectralClassification(
        eig_lagrangian=eig_l,
        eig_constrained=eig_c,
        solves_lagrangian=solves_l,
        solves_constrained=solves_c,
        tol_eig=tol_eig,
    )


def classify_stationary_point(
    kind: ObjectiveKind,
    p: JointDistribution,
    sp: StationaryPoint,
    tol_eig: float = TOL_EIG,
) -> SpectralClassification:
    """Classify a converged stationary point and attach the result to it."""
    cls = classify_quantizer(kind, p, sp.q, sp.beta, tol_eig)
    sp.classification = cls
    return cls


def top_kernel_eigenpair(
    kind: ObjectiveKind, p: JointDistribution, q: np.ndarray, beta: float
) -> tuple[float, np.ndarray]:
    """Largest eigenvalue of the kernel-projected Hessian with its direction."""
    n_classes, n_symbols = q.shape
    H = hessian_annealed(kind, p, q, beta)
    eig, vecs = projected_eigenvalues(H, kernel_basis(n_symbols, n_classes))
    return float(eig[0]), vecs[:, 0].reshape(n_classes, n_symbols)


# ---------------------------------------------------------------------------
# symmetry helpers
# ---------------------------------------------------------------------------

def canonical_class_order(q: np.ndarray) -> np.ndarray:
    """Permutation placing class rows in lexicographic order."""
    keys = tuple(q[:, k] for k in range(q.shape[1] - 1, -1, -1))
    return np.lexsort(keys)


def canonical_form(q: np.ndarray) -> np.ndarray:
    """The quantizer with classes relabeled into canonical order."""
    return q[canonical_class_order(q)]


def class_partition(q: np.ndarray, tol: float = 1e-5) -> tuple[int, ...]:
    """Partition of classes into equality groups, as sorted group sizes."""
    n = q.shape[0]
    used = np.zeros(n, dtype=bool)
    sizes = []
    for i in range(n):
        if used[i]:
            continue
        size = 1
        used[i] = True
        for j in range(i + 1, n):
            if not used[j] and float(np.abs(q[i] - q[j]).max()) < tol:
                used[j] = True
                size += 1
        sizes.append(size)
    return tuple(sorted(sizes, reverse=True))


def breaks_symmetry(vec: np.ndarray, tol: float = 1e-10) -> bool:
    """True when a direction is not invariant under some class transposition."""
    n = vec.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            swapped = vec.copy()
            swapped[[i, j]] = swapped[[j, i]]
            if float(np.abs(swapped - vec).max()) > tol:
                return True
    return False


# ---------------------------------------------------------------------------
# bifurcation detection
# ---------------------------------------------------------------------------

def _is_uniform(q: np.ndarray, tol: float = 1e-9) -> bool:
    return float(np.abs(q - 1.0 / q.shape[0]).max()) < tol


def _continued_top_eig(kind, p, q_seed, beta, newton_tol=1e-11):
    """Top kernel eigenvalue of the branch continued to `beta` from `q_seed`.

    The uniform branch is stationary at every beta, so it is evaluated
    directly; other branches are re-solved with the fixed-beta Newton
    system warm-started from the seed. Returns (eig, vec, q) or None when
    the continuation fails.
    """
    if _is_uniform(q_seed):
        q = np.full_like(q_seed, 1.0 / q_seed.shape[0])
    else:
        q, _lam, _res, ok = solve_stationary(kind, p, q_seed, beta, tol=newton_tol)
        if not ok or float(np.abs(q - q_seed).max()) > 0.2:
            return None
    eig, vec = top_kernel_eigenpair(kind, p, q, beta)
    return eig, vec, q


def refine_eigenvalue_crossing(
    kind: ObjectiveKind,
    p: JointDistribution,
    q_lo: np.ndarray,
    beta_lo: float,
    beta_hi: float,
    beta_resolution: float = 1e-6,
) -> tuple[float, np.ndarray] | None:
    """Bisect on beta for the zero of the top kernel eigenvalue.

    The branch is continued from the low-beta side at each probe. Returns
    (refined beta, crossing eigenvector) or None when no bracket exists.
    """
    lo = _continued_top_eig(kind, p, q_lo, beta_lo)
    hi = _continued_top_eig(kind, p, q_lo, beta_hi)
    if lo is None or hi is None:
        return None
    if lo[0] >= 0 or hi[0] <= 0:
        return None
    q_seed = lo[2]
    vec = hi[1]
    while beta_hi - beta_lo > beta_resolution:
        mid = 0.5 * (beta_lo + beta_hi)
        probe = _continued_top_eig(kind, p, q_seed, mid)
        if probe is None:
            break
        if probe[0] < 0:
            beta_lo, q_seed = mid, probe[2]
        else:
            beta_hi, vec = mid, probe[1]
    return 0.5 * (beta_lo + beta_hi), vec


def detect_bifurcations(
    kind: ObjectiveKind,
    p: JointDistribution,
    branch: Branch,
    tol_eig: float = TOL_EIG,
    beta_resolution: float = 1e-6,
) -> list[BifurcationEvent]:
    """Scan a classified branch for eigenvalue crossings and beta folds.

    Pitchfork-like events are emitted where the largest Lagrangian-kernel
    eigenvalue changes sign between consecutive points (refined by
    bisection in beta); saddle-node events where beta reverses direction
    along the branch arc. Points missing a classification are classified
    in place.
    """
    events: list[BifurcationEvent] = []
    pts = branch.points
    if len(pts) < 3:
        return events
    for sp in pts:
        if sp.classification is None:
            classify_stationary_point(kind, p, sp, tol_eig)
    # eigenvalue crossings
    for a, b in zip(pts, pts[1:]):
        ea = a.classification.margin_lagrangian
        eb = b.classification.margin_lagrangian
        if ea is None or eb is None:
            continue
        if ea < -tol_eig and eb > tol_eig:
            refined = refine_eigenvalue_crossing(
                kind, p, a.q, a.beta, b.beta, beta_resolution
            )
            if refined is None:
                beta_c = 0.5 * (a.beta + b.beta)
                _, vec = top_kernel_eigenpair(kind, p, b.q, b.beta)
            else:
                beta_c, vec = refined
            events.append(
                BifurcationEvent(
                    beta=float(beta_c),
                    kind="pitchfork_like",
                    eigenvector=vec.reshape(a.q.shape),
                    parent_branch=branch.branch_id,
                )
            )
    # beta folds along the arc
    betas = branch.betas
    d = np.diff(betas)
    for i in range(len(d) - 1):
        if d[i] * d[i + 1] < 0 and max(abs(d[i]), abs(d[i + 1])) > 1e-12:
            sp = pts[i + 1]
            eig, vec = top_kernel_eigenpair(kind, p, sp.q, sp.beta)
            events.append(
                BifurcationEvent(
                    beta=float(sp.beta),
                    kind="saddle_node",
                    eigenvector=vec,
                    parent_branch=branch.branch_id,
                )
            )
    events.sort(key=lambda e: e.beta)
    return events
