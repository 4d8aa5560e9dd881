"""Self-consistent fixed-point annealing over an increasing beta schedule.

At each beta the stationarity condition grad G + beta grad I + lambda = 0
is solved by iterating the explicit self-consistent update (with a short
Newton polish to drive the KKT residual to the tolerance). Before each
re-solve the previous solution is kicked by a small seeded tangent
perturbation so that symmetry-broken branches become reachable once the
current branch loses stability.

Branches are cut where the class-equality signature of the solution
changes or the solution jumps by more than the continuation step bound;
pitchfork-like events between a parent branch and its successor are
refined by bisection on the parent continuation.
"""

from __future__ import annotations

import numpy as np

from .exceptions import NonConvergenceError
from .information import (
    JointDistribution,
    ObjectiveKind,
    PROB_FLOOR,
    grad_information,
    mutual_information_xyn,
    objective_value,
    uniform_quantizer,
)
from .newton import least_squares_multipliers, solve_stationary, stationarity_residual
from .spectral import class_partition, classify_stationary_point, refine_eigenvalue_crossing
from .state import AnnealResult, AnnealSchedule, BifurcationEvent, Branch, StationaryPoint

# Converged solutions closer to uniform than this are snapped onto the
# exactly uniform quantizer, which is stationary at every beta.
UNIFORM_SNAP = 1e-9


def fixed_point_update(
    kind: ObjectiveKind, p: JointDistribution, q: np.ndarray, beta: float
) -> np.ndarray:
    """One self-consistent update of the quantizer.

    Information distortion:  q'_{nu k} = exp(beta (grad I)_{nu k} / p_k) / Z_k.
    Information bottleneck:  the same with a p(nu) prefactor inside Z_k.
    Exponents are shifted by their column maximum before exponentiating,
    so the update is overflow-safe at any beta; the output is exactly
    column-stochastic.
    """
    gI = grad_information(p, q)
    if not np.all(np.isfinite(gI)):
        raise FloatingPointError("non-finite information gradient in fixed-point update")
    E = beta * gI / p.py[None, :]
    E -= E.max(axis=0, keepdims=True)
    W = np.exp(E)
    if kind is ObjectiveKind.INFORMATION_BOTTLENECK:
        pn = q @ p.py
        W = np.clip(pn, PROB_FLOOR, None)[:, None] * W
    return W / W.sum(axis=0, keepdims=True)


def lagrange_multipliers(
    kind: ObjectiveKind, p: JointDistribution, q: np.ndarray, beta: float
) -> np.ndarray:
    """Normalization multipliers lambda_k at (q, beta).

    For the distortion objective this is the closed form
    lambda_k = p_k (1 - ln sum_nu exp(beta (grad I)_{nu k} / p_k)),
    evaluated with max-subtraction for overflow safety. For the
    bottleneck objective the multipliers are recovered row-wise from the
    stationarity equation in the least-squares sense (exact at stationary
    points).
    """
    if kind is ObjectiveKind.INFORMATION_BOTTLENECK:
        return least_squares_multipliers(kind, p, q, beta)
    gI = grad_information(p, q)
    E = beta * gI / p.py[None, :]
    m = E.max(axis=0)
    logz = m + np.log(np.exp(E - m[None, :]).sum(axis=0))
    return p.py * (1.0 - logz)


def multiplier_sum(kind: ObjectiveKind, p: JointDistribution, q: np.ndarray, beta: float) -> float:
    """Lambda = sum_k lambda_k; along smooth branches d Lambda / d beta = -I."""
    return float(lagrange_multipliers(kind, p, q, beta).sum())


def kkt_residual_norm(
    kind: ObjectiveKind,
    p: JointDistribution,
    q: np.ndarray,
    beta: float,
    lam: np.ndarray,
) -> float:
    """Sup-norm of the Lagrangian gradient grad G + beta grad I + lambda."""
    return float(np.abs(stationarity_residual(kind, p, q, beta, lam)).max())


def _make_point(kind, p, q, beta, converged=True) -> StationaryPoint:
    lam = lagrange_multipliers(kind, p, q, beta)
    return StationaryPoint(
        q=q,
        beta=float(beta),
        lam=lam,
        kkt_residual=kkt_residual_norm(kind, p, q, beta, lam),
        objective_value=objective_value(kind, p, q),
        constraint_value=mutual_information_xyn(p, q),
        converged=converged,
    )


def solve_at_beta(
    kind: ObjectiveKind,
    p: JointDistribution,
    q0: np.ndarray,
    beta: float,
    schedule: AnnealSchedule | None = None,
) -> StationaryPoint:
    """Iterate the fixed point from q0 until the sup-norm step is below tolerance.

    A short Newton polish follows whenever the fixed point converged (or
    stalled close to a stationary point), bringing the KKT residual to
    roughly machine precision. Raises NonConvergenceError when neither
    the iteration nor the polish reaches a stationary point.
    """
    schedule = schedule or AnnealSchedule(beta_max=max(beta, 1e-6) * 2 + 1)
    tol = schedule.convergence_tol
    q = np.asarray(q0, dtype=float)
    step = np.inf
    for _ in range(schedule.max_fixed_point_iters):
        qn = fixed_point_update(kind, p, q, beta)
        step = float(np.abs(qn - q).max())
        q = qn
        if step < tol:
            break
    if float(np.abs(q - 1.0 / q.shape[0]).max()) < UNIFORM_SNAP:
        q = uniform_quantizer(*q.shape)
    sp = _make_point(kind, p, q, beta)
    target = tol * 10
    if sp.kkt_residual > target * 0.1:
        qn, lam, _res, ok = solve_stationary(kind, p, q, beta, tol=min(1e-12, target * 0.01))
        if ok:
            qn = np.clip(qn, 0.0, None)
            qn = qn / qn.sum(axis=0, keepdims=True)
            if float(np.abs(qn - 1.0 / qn.shape[0]).max()) < UNIFORM_SNAP:
                qn = uniform_quantizer(*qn.shape)
            polished = _make_point(kind, p, qn, beta)
            if polished.kkt_residual < sp.kkt_residual:
                sp = polished
    if step >= tol and sp.kkt_residual > target:
        raise NonConvergenceError(
            f"fixed point did not converge at beta={beta:.6g}", sp.kkt_residual
        )
    return sp


def tangent_perturbation(
    rng: np.random.Generator, q: np.ndarray, size: float
) -> np.ndarray:
    """Kick q by `size` along a random direction with zero column sums.

    The result is clipped away from the boundary and renormalized, so it
    is a valid strictly positive quantizer.
    """
    if size == 0:
        return q.copy()
    V = rng.standard_normal(q.shape)
    V -= V.mean(axis=0, keepdims=True)
    vmax = np.abs(V).max()
    if vmax > 0:
        V /= vmax
    out = np.clip(q + size * V, PROB_FLOOR * 10, None)
    return out / out.sum(axis=0, keepdims=True)


def anneal(
    kind: ObjectiveKind,
    p: JointDistribution,
    n_classes: int,
    schedule: AnnealSchedule | None = None,
    classify: bool = True,
) -> AnnealResult:
    """Sweep beta upward from the uniform quantizer and collect branches.

    Returns the discovered branches (classified when `classify` is True)
    and the bifurcation events: one refined pitchfork-like event per
    branch transition, plus any events found within single branches.
    Identical inputs produce bit-identical output.
    """
    schedule = schedule or AnnealSchedule()
    rng = np.random.default_rng(schedule.rng_seed)
    q = uniform_quantizer(n_classes, p.n_symbols)

    sp0 = solve_at_beta(kind, p, q, schedule.beta_start, schedule)
    branches: list[Branch] = [
        Branch(branch_id=0, provenance="uniform_root", points=[sp0],
               signature=class_partition(sp0.q))
    ]
    q_prev = sp0.q
    beta = schedule.beta_start
    step = schedule.step
    prev_jump = 0.0

    while beta < schedule.beta_max - 1e-12:
        beta_next = min(beta + step, schedule.beta_max)
        q0 = tangent_perturbation(rng, q_prev, schedule.perturbation)
        try:
            sp = solve_at_beta(kind, p, q0, beta_next, schedule)
        except NonConvergenceError:
            if step / 2 < schedule.step_min:
                raise
            step /= 2
            continue
        jump = float(np.abs(sp.q - q_prev).max())
        sig = class_partition(sp.q)
        cur = branches[-1]
        broke = sig != cur.signature or jump > max(schedule.jump_tol, 5 * prev_jump)
        if broke:
            nb = Branch(
                branch_id=cur.branch_id + 1,
                provenance="pitchfork_child",
                points=[sp],
                signature=sig,
            )
            branches.append(nb)
            step = max(schedule.step * schedule.ramp_init, schedule.step_min * 4)
            prev_jump = 0.0
        else:
            cur.points.append(sp)
            prev_jump = jump
            step = min(step * schedule.ramp_growth, schedule.step)
        beta = beta_next
        q_prev = sp.q

    events: list[BifurcationEvent] = []
    if classify:
        from .spectral import detect_bifurcations  # late import: keeps module init light

        for br in branches:
            for sp in br.points:
                classify_stationary_point(kind, p, sp)
        for br in branches:
            events.extend(detect_bifurcations(kind, p, br))
        for parent, child in zip(branches, branches[1:]):
            ev = _transition_event(kind, p, parent, child)
            if ev is not None:
                events.append(ev)
        events.sort(key=lambda e: e.beta)
    return AnnealResult(branches=branches, events=events)


def _transition_event(
    kind: ObjectiveKind, p: JointDistribution, parent: Branch, child: Branch
) -> BifurcationEvent | None:
    """Refine the symmetry-breaking event between a branch and its successor.

    Bisection runs on the parent continuation between the last parent beta
    and the first child beta; when the parent stays stable through the gap
    (possible if the solver jumped early), the bracket is widened up to one
    full step past the child start.
    """
    beta_lo = parent.points[-1].beta
    beta_hi = child.points[0].beta
    q_lo = parent.points[-1].q
    width = max(beta_hi - beta_lo, 1e-6)
    refined = refine_eigenvalue_crossing(kind, p, q_lo, beta_lo, beta_hi + width)
    if refined is None:
        return None
    beta_c, vec = refined
    return BifurcationEvent(
        beta=float(beta_c),
        kind="pitchfork_like",
        eigenvector=vec,
        parent_branch=parent.branch_id,
        child_branches=[child.branch_id],
    )
