"""Numerical property suites behind the ``verify`` CLI command.

Each suite returns a list of (name, observed, tolerance, passed) records;
a suite passes when every record does. The euler and gradients suites run
on seeded random instances; the classification and curve-identity suites
run on a provided or generated dataset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .annealing import anneal
from .curve import build_curve, derivative_report, information_ceiling
from .information import (
    JointDistribution,
    ObjectiveKind,
    conditional_entropy_yn_given_y,
    grad_conditional_entropy,
    grad_information,
    grad_neg_mutual_information_yyn,
    grad_objective,
    hessian_annealed,
    mutual_information_xyn,
    mutual_information_yyn,
    objective_value,
    random_joint,
    random_quantizer,
)
from .state import AnnealSchedule, CurveSpec


@dataclass
class CheckResult:
    name: str
    observed: float
    tolerance: float
    passed: bool


def _check(name: str, observed: float, tolerance: float) -> CheckResult:
    return CheckResult(name, float(observed), tolerance, bool(observed < tolerance))


def suite_euler(seed: int = 0, n_instances: int = 200) -> list[CheckResult]:
    """Euler identities q . grad f on random strictly positive instances."""
    rng = np.random.default_rng(seed)
    worst_i = worst_h = worst_y = 0.0
    for _ in range(n_instances):
        kx = int(rng.integers(2, 11))
        k = int(rng.integers(2, 11))
        n = int(rng.integers(2, 6))
        p = random_joint(rng, kx, k)
        q = random_quantizer(rng, n, k)
        i_val = mutual_information_xyn(p, q)
        worst_i = max(worst_i, abs(float(np.sum(q * grad_information(p, q))) - i_val))
        h_val = conditional_entropy_yn_given_y(p, q)
        worst_h = max(
            worst_h,
            abs(float(np.sum(q * grad_conditional_entropy(p, q))) - (h_val - 1.0)),
        )
        y_val = -mutual_information_yyn(p, q)
        worst_y = max(
            worst_y,
            abs(float(np.sum(q * grad_neg_mutual_information_yyn(p, q))) - y_val),
        )
    return [
        _check("euler: |q.grad I - I|", worst_i, 1e-10),
        _check("euler: |q.grad H - (H - 1)|", worst_h, 1e-10),
        _check("euler: |q.grad(-I_yyn) - (-I_yyn)|", worst_y, 1e-10),
    ]


def _tangent_fd(f, q, h=1e-6):
    """Tangent-space central differences of a scalar functional, all coordinates."""
    n, k = q.shape
    out = np.zeros((n, k))
    for nu in range(n):
        for kk in range(k):
            V = np.zeros((n, k))
            V[nu, kk] = 1.0
            V[:, kk] -= 1.0 / n
            out[nu, kk] = (f(q + h * V) - f(q - h * V)) / (2 * h)
    return out


def _project_tangent(g):
    return g - g.mean(axis=0, keepdims=True)


def suite_gradients(seed: int = 0, n_instances: int = 25) -> list[CheckResult]:
    """Analytic gradients and Hessians against finite differences."""
    rng = np.random.default_rng(seed)
    worst_grad = 0.0
    worst_hess = 0.0
    for _ in range(n_instances):
        kx = int(rng.integers(2, 7))
        k = int(rng.integers(2, 7))
        n = int(rng.integers(2, 5))
        p = random_joint(rng, kx, k)
        q = random_quantizer(rng, n, k)
        funcs = [
            (lambda qq: mutual_information_xyn(p, qq), grad_information(p, q)),
            (
                lambda qq: conditional_entropy_yn_given_y(p, qq),
                grad_conditional_entropy(p, q),
            ),
            (
                lambda qq: -mutual_information_yyn(p, qq),
                grad_neg_mutual_information_yyn(p, q),
            ),
        ]
        for f, g in funcs:
            fd = _tangent_fd(f, q)
            gp = _project_tangent(g)
            scale = max(float(np.abs(gp).max()), 1e-8)
            worst_grad = max(worst_grad, float(np.abs(fd - gp).max()) / scale)
        beta = float(rng.uniform(0.2, 2.0))
        for kind in ObjectiveKind:
            H = hessian_annealed(kind, p, q, beta)
            h = 1e-6
            for idx in range(n * k):
                nu, kk = divmod(idx, k)
                E = np.zeros((n, k))
                E[nu, kk] = h
                gp_ = grad_objective(kind, p, q + E) + beta * grad_information(p, q + E)
                gm_ = grad_objective(kind, p, q - E) + beta * grad_information(p, q - E)
                col = ((gp_ - gm_) / (2 * h)).reshape(n * k)
                worst_hess = max(worst_hess, float(np.abs(col - H[:, idx]).max()))
    return [
        _check("gradients: tangent FD rel err", worst_grad, 1e-6),
        _check("hessians: FD-of-gradient abs err", worst_hess, 1e-5),
    ]


def suite_classification(
    p: JointDistribution,
    n_classes: int = 2,
    seed: int = 0,
    beta_max: float | None = None,
) -> list[CheckResult]:
    """Kernel-test consistency on an annealing run over the dataset.

    Checks that every classified point with a defined constrained test
    satisfies (lagrangian solution => constrained solution), and that the
    classification is invariant under class relabeling.
    """
    from .spectral import classify_quantizer

    if beta_max is None:
        from .newton import uniform_branch_crossing

        beta_star, _ = uniform_branch_crossing(
            ObjectiveKind.INFORMATION_DISTORTION, p, n_classes
        )
        beta_max = beta_star * 1.2
    schedule = AnnealSchedule(beta_max=beta_max, step=beta_max / 25, rng_seed=seed)
    result = anneal(ObjectiveKind.INFORMATION_DISTORTION, p, n_classes, schedule)
    violations = 0
    perm_err = 0.0
    rng = np.random.default_rng(seed)
    pts = result.all_points()
    for sp in pts:
        cls = sp.classification
        if cls.solves_lagrangian and cls.solves_constrained is False:
            violations += 1
    for sp in pts[:: max(1, len(pts) // 10)]:
        perm = rng.permutation(n_classes)
        cls_p = classify_quantizer(
            ObjectiveKind.INFORMATION_DISTORTION, p, sp.q[perm], sp.beta
        )
        perm_err = max(
            perm_err,
            float(np.abs(cls_p.eig_lagrangian - sp.classification.eig_lagrangian).max()),
        )
    return [
        _check("classification: lagrangian => constrained violations", violations, 1),
        _check("classification: relabeling eigenvalue shift", perm_err, 1e-10),
    ]


def suite_curve_identity(
    p: JointDistribution, n_classes: int = 2, seed: int = 0
) -> list[CheckResult]:
    """dR/dI0 = -beta on a fine curve segment of the dataset."""
    ceiling = information_ceiling(p, n_classes)
    center = 0.4 * ceiling
    spec = CurveSpec(
        i0_min=center - 5e-3,
        i0_max=center + 5e-3,
        n_points=11,
        n_classes=n_classes,
        rng_seed=seed,
    )
    curve = build_curve(spec, ObjectiveKind.INFORMATION_DISTORTION, p)
    report = derivative_report(curve)
    return [
        _check("curve: |dR/dI0 + beta| rel err", report.slope_max_rel_err, 1e-2),
        CheckResult(
            "curve: sign changes of dbeta/dI0 (informational)",
            float(len(report.sign_changes)),
            float("inf"),
            True,
        ),
    ]


SUITES = ("euler", "gradients", "theorem1", "theorem3")


def run_suites(
    names: list[str],
    p: JointDistribution | None,
    n_classes: int = 2,
    seed: int = 0,
) -> list[CheckResult]:
    """Run the named suites; dataset-based suites get a small default instance."""
    results: list[CheckResult] = []
    for name in names:
        if name == "euler":
            results.extend(suite_euler(seed))
        elif name == "gradients":
            results.extend(suite_gradients(seed))
        elif name == "theorem1":
            data = p if p is not None else _default_dataset()
            results.extend(suite_classification(data, n_classes, seed))
        elif name == "theorem3":
            data = p if p is not None else _default_dataset()
            results.extend(suite_curve_identity(data, n_classes, seed))
        else:
            raise ValueError(f"unknown suite {name!r}; use one of {SUITES}")
    return results


def _default_dataset() -> JointDistribution:
    from .datasets import two_cluster_joint

    return two_cluster_joint()
