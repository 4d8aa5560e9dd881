"""Relevance-compression curves R(I0) by fixed-I0 constrained solves.

For each target information level I0 the extended KKT system is solved by
Newton iteration with multiple warm starts, and the best converged
candidate (maximal objective) is kept. Because the curve is parameterized
by I0, the sweep passes smoothly through saddle-node folds in beta, which
is how subcritical branch segments that the beta annealer cannot reach
are recovered.

The derivative report checks the identities dR/dI0 = -beta(I0) and
d^2R/dI0^2 = -dbeta/dI0 by centered finite differences on smooth curve
segments, and flags sign changes of dbeta/dI0 (the curve is then neither
concave nor convex).
"""

from __future__ import annotations

import numpy as np

from .exceptions import InfeasibleTargetError, NonConvergenceError
from .information import (
    JointDistribution,
    ObjectiveKind,
    hessian_information,
    mutual_information_xyn,
    objective_value,
    random_quantizer,
    uniform_quantizer,
)
from .newton import solve_kkt_constrained, uniform_branch_crossing
from .spectral import class_partition, classify_quantizer
from .state import Branch, CurveDerivativeReport, CurvePoint, CurveSpec, StationaryPoint

# A candidate whose recovered multiplier is this negative is a
# minimizer-side artifact, not a curve point.
BETA_NEGATIVE_TOL = 1e-9
# Objective differences below this are label-permutation ties, not wins.
VALUE_TIE = 1e-10


def information_ceiling(p: JointDistribution, n_classes: int) -> float:
    """Upper bound min(I(X;Y), ln N) on the information any quantizer retains."""
    return float(min(p.mutual_information, np.log(n_classes)))


def _pencil_seeds(kind, p, n_classes, i0):
    """Near-uniform seeds along the first crossing direction, scaled to reach i0."""
    try:
        beta_star, v = uniform_branch_crossing(kind, p, n_classes)
    except ValueError:
        return []
    qu = uniform_quantizer(n_classes, p.n_symbols)
    curv = float(v.reshape(-1) @ hessian_information(p, qu) @ v.reshape(-1))
    if curv <= 0:
        return []
    t = np.sqrt(2.0 * i0 / curv)
    t = min(t, 0.2 / float(np.abs(v).max()))
    seeds = []
    for sign in (1.0, -1.0):
        q0 = np.clip(qu + sign * t * v, 1e-4 / n_classes, None)
        seeds.append((q0 / q0.sum(axis=0, keepdims=True), beta_star))
    return seeds


def _annealed_ladder(kind, p, n_classes, rng, factors=(1.0, 1.6, 2.5, 4.0)):
    """Fixed-point solutions at escalating beta, as diverse cold starts."""
    from .annealing import solve_at_beta, tangent_perturbation

    try:
        beta_star, _ = uniform_branch_crossing(kind, p, n_classes)
    except ValueError:
        beta_star = 1.0
    out = []
    q = tangent_perturbation(rng, uniform_quantizer(n_classes, p.n_symbols), 1e-3)
    for f in factors:
        beta_probe = beta_star * f
        try:
            sp = solve_at_beta(kind, p, q, beta_probe)
        except (NonConvergenceError, FloatingPointError):
            continue
        out.append((sp.q, beta_probe))
        q = tangent_perturbation(rng, sp.q, 1e-3)
    return out


def solve_constrained(
    kind: ObjectiveKind,
    p: JointDistribution,
    i0: float,
    n_classes: int,
    warm_start: tuple[np.ndarray, float] | None = None,
    branches: list[Branch] | None = None,
    restarts: int = 8,
    rng: np.random.Generator | None = None,
    newton_tol: float = 1e-12,
    active_tol: float = 1e-8,
) -> CurvePoint:
    """Best stationary point of the I(X;Y_N) = i0 constrained problem.

    Candidates come from the warm start, near-uniform crossing seeds,
    the closest annealed branch points, and seeded random perturbations
    of the best candidates; the converged point with maximal objective
    value is returned. Raises InfeasibleTargetError when i0 exceeds the
    information ceiling and NonConvergenceError when no start converges.
    """
    ceiling = information_ceiling(p, n_classes)
    if not 0 < i0 < ceiling:
        raise InfeasibleTargetError(
            f"target I0={i0:.6g} outside the attainable range (0, {ceiling:.6g})"
        )
    rng = rng or np.random.default_rng(0)
    starts: list[tuple[np.ndarray, float]] = []
    if warm_start is not None:
        starts.append(warm_start)
    starts.extend(_pencil_seeds(kind, p, n_classes, i0))
    if branches:
        pts = [sp for br in branches for sp in br.points if sp.q.shape[0] == n_classes]
        if pts:
            nearest = min(pts, key=lambda sp: abs(sp.constraint_value - i0))
            starts.append((nearest.q, nearest.beta))

    if warm_start is None:
        # cold solve: seed from fixed-point solutions at escalating beta too
        starts.extend(_annealed_ladder(kind, p, n_classes, rng))
    best: CurvePoint | None = None
    attempts = len(starts) + max(restarts, 1)
    ladder_used = warm_start is None
    tried = 0
    i = 0
    while i < len(starts):
        q0, b0 = starts[i]
        i += 1
        tried += 1
        q, beta, lam, res, ok = solve_kkt_constrained(
            kind, p, q0, b0, i0, tol=newton_tol
        )
        if ok and abs(mutual_information_xyn(p, q) - i0) < active_tol \
                and beta > -BETA_NEGATIVE_TOL:
            cand = CurvePoint(
                i0=float(i0),
                value=objective_value(kind, p, q),
                beta=float(beta),
                branch_id=-1,
                kkt_residual=res,
                q=q,
                lam=lam,
            )
            if best is None:
                best = cand
            elif cand.value > best.value + VALUE_TIE:
                best = cand
            elif cand.value > best.value - VALUE_TIE and warm_start is not None:
                # tie between relabeled copies: stay on the warm-start branch
                ref = warm_start[0]
                if float(np.abs(cand.q - ref).max()) < float(np.abs(best.q - ref).max()):
                    best = cand
        if i == len(starts) and tried < attempts:
            if best is None and not ladder_used:
                starts.extend(_annealed_ladder(kind, p, n_classes, rng))
                ladder_used = True
            elif best is not None:
                # perturbed restart around the best candidate found so far,
                # with growing kick sizes to reach competing branches
                V = rng.standard_normal(best.q.shape)
                V -= V.mean(axis=0, keepdims=True)
                size = (0.05, 0.2, 0.5)[tried % 3]
                scale = size / max(float(np.abs(V).max()), 1e-12)
                qp = np.clip(best.q + scale * V, 1e-6 / n_classes, None)
                starts.append((qp / qp.sum(axis=0, keepdims=True), best.beta))
            else:
                starts.append((random_quantizer(rng, n_classes, p.n_symbols), 1.0))
    if best is None:
        raise NonConvergenceError(f"no start converged at I0={i0:.6g}", float("nan"))
    return best


def build_curve(
    spec: CurveSpec,
    kind: ObjectiveKind,
    p: JointDistribution,
    branches: list[Branch] | None = None,
) -> list[CurvePoint]:
    """Sweep I0 ascending with warm starts and return the best point per level.

    A backward refinement pass re-solves each level warm-started from its
    right neighbor, repairing points where the forward sweep found only a
    sub-optimal branch; the result is checked to be non-increasing within
    spec.mono_tol. Branch ids group consecutive points whose quantizers
    deform continuously.
    """
    ceiling = information_ceiling(p, spec.n_classes)
    if spec.i0_max >= ceiling:
        raise InfeasibleTargetError(
            f"i0_max={spec.i0_max:.6g} is not below the information ceiling {ceiling:.6g}"
        )
    rng = np.random.default_rng(spec.rng_seed)
    grid = spec.grid()
    points: list[CurvePoint] = []
    warm = None
    for i0 in grid:
        cp = solve_constrained(
            kind, p, float(i0), spec.n_classes,
            warm_start=warm, branches=branches, restarts=spec.restarts,
            rng=rng, newton_tol=spec.newton_tol, active_tol=spec.active_tol,
        )
        points.append(cp)
        warm = (cp.q, cp.beta)
    # backward refinement: a later point's branch may dominate earlier levels
    for idx in range(len(points) - 2, -1, -1):
        nxt = points[idx + 1]
        try:
            cand = solve_constrained(
                kind, p, points[idx].i0, spec.n_classes,
                warm_start=(nxt.q, nxt.beta), restarts=2, rng=rng,
                newton_tol=spec.newton_tol, active_tol=spec.active_tol,
            )
        except NonConvergenceError:
            continue
        if cand.value > points[idx].value + VALUE_TIE:
            points[idx] = cand
    _assign_branch_ids(points)
    values = np.array([cp.value for cp in points])
    if np.any(np.diff(values) > spec.mono_tol):
        bad = int(np.argmax(np.diff(values)))
        raise NonConvergenceError(
            f"curve increases by {float(np.diff(values)[bad]):.3e} after I0="
            f"{points[bad].i0:.6g}; the solver missed the dominating branch",
            float(np.diff(values)[bad]),
        )
    return points


def _assign_branch_ids(points: list[CurvePoint], jump_tol: float = 0.1) -> None:
    """Group consecutive points into branches by continuity of q."""
    bid = 0
    for i, cp in enumerate(points):
        if i > 0:
            prev = points[i - 1]
            jump = float(np.abs(cp.q - prev.q).max())
            if jump > jump_tol or class_partition(cp.q) != class_partition(prev.q):
                bid += 1
        cp.branch_id = bid


def recovered_branches(
    curve: list[CurvePoint], kind: ObjectiveKind, p: JointDistribution
) -> list[Branch]:
    """Repackage curve points as branches ordered by I0 (the arc position).

    Saddle-node folds show up as beta reversals along these branches, so
    they can be fed to the bifurcation detector.
    """
    branches: dict[int, Branch] = {}
    for cp in curve:
        br = branches.get(cp.branch_id)
        if br is None:
            br = Branch(
                branch_id=cp.branch_id,
                provenance="constrained_recovery",
                signature=class_partition(cp.q),
            )
            branches[cp.branch_id] = br
        br.points.append(
            StationaryPoint(
                q=cp.q,
                beta=cp.beta,
                lam=cp.lam,
                kkt_residual=cp.kkt_residual,
                objective_value=cp.value,
                constraint_value=cp.i0,
                classification=cp.classification,
            )
        )
    return [branches[k] for k in sorted(branches)]


def classify_curve(
    curve: list[CurvePoint], kind: ObjectiveKind, p: JointDistribution, tol_eig: float = 1e-8
) -> None:
    """Attach spectral classifications to every curve point in place."""
    for cp in curve:
        cp.classification = classify_quantizer(kind, p, cp.q, cp.beta, tol_eig)


def beta_of_i0(curve: list[CurvePoint]) -> list[tuple[float, float]]:
    """The multiplier trace (I0, beta(I0)) of a curve."""
    return [(cp.i0, cp.beta) for cp in curve]


def _three_point_derivative(x0, x1, x2, f0, f1, f2):
    """Derivative at x1 of the quadratic through three points (nonuniform grid)."""
    h1, h2 = x1 - x0, x2 - x1
    return (h1 * h1 * f2 + (h2 * h2 - h1 * h1) * f1 - h2 * h2 * f0) / (
        h1 * h2 * (h1 + h2)
    )


def _three_point_second_derivative(x0, x1, x2, f0, f1, f2):
    h1, h2 = x1 - x0, x2 - x1
    return 2.0 * (h1 * f2 - (h1 + h2) * f1 + h2 * f0) / (h1 * h2 * (h1 + h2))


def derivative_report(
    curve: list[CurvePoint], min_segment: int = 5, slope_floor: float = 1e-6
) -> CurveDerivativeReport:
    """Finite-difference check of dR/dI0 = -beta and d^2R/dI0^2 = -dbeta/dI0.

    Only interior points of maximal single-branch segments with at least
    `min_segment` points are checked. Sign changes of dbeta/dI0 are
    collected over the whole curve wherever both adjacent secant slopes
    exceed `slope_floor` in magnitude.
    """
    if len(curve) < min_segment:
        raise ValueError(f"need at least {min_segment} curve points on a smooth segment")
    i0s = np.array([cp.i0 for cp in curve])
    rs = np.array([cp.value for cp in curve])
    betas = np.array([cp.beta for cp in curve])
    bids = np.array([cp.branch_id for cp in curve])

    segments: list[tuple[int, int]] = []
    start = 0
    for i in range(1, len(curve) + 1):
        if i == len(curve) or bids[i] != bids[start]:
            if i - start >= min_segment:
                segments.append((start, i))
            start = i
    slope_err = 0.0
    curv_err = 0.0
    checked = 0
    for lo, hi in segments:
        for j in range(lo + 1, hi - 1):
            dr = _three_point_derivative(
                i0s[j - 1], i0s[j], i0s[j + 1], rs[j - 1], rs[j], rs[j + 1]
            )
            rel = abs(dr + betas[j]) / max(betas[j], 1e-6)
            slope_err = max(slope_err, rel)
            d2r = _three_point_second_derivative(
                i0s[j - 1], i0s[j], i0s[j + 1], rs[j - 1], rs[j], rs[j + 1]
            )
            dbeta = _three_point_derivative(
                i0s[j - 1], i0s[j], i0s[j + 1], betas[j - 1], betas[j], betas[j + 1]
            )
            denom = max(abs(dbeta), slope_floor)
            curv_err = max(curv_err, abs(d2r + dbeta) / denom)
            checked += 1
    if checked == 0:
        raise ValueError("no smooth segment long enough to check")

    sign_changes: list[float] = []
    sec = np.diff(betas) / np.diff(i0s)
    for j in range(len(sec) - 1):
        if abs(sec[j]) > slope_floor and abs(sec[j + 1]) > slope_floor \
                and sec[j] * sec[j + 1] < 0:
            sign_changes.append(float(i0s[j + 1]))
    return CurveDerivativeReport(
        slope_max_rel_err=float(slope_err),
        curvature_max_rel_err=float(curv_err),
        sign_changes=sign_changes,
        n_points_checked=checked,
        segments=segments,
    )
