"""Command-line interface.

Subcommands
-----------
gen-data   write a Gaussian-mixture joint distribution to CSV
anneal     sweep beta, write branch CSV and bifurcation summary JSON
curve      sweep I0, write curve CSV and derivative-report summary JSON
verify     run numerical property suites, nonzero exit on violation

Exit codes: 0 success, 2 usage or configuration error, 3 solver
non-convergence, 4 verification failure. All commands honor --seed and
produce bit-identical outputs for identical inputs. --unit only affects
console display; files always carry nats.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .annealing import anneal
from .curve import (
    build_curve,
    classify_curve,
    derivative_report,
    information_ceiling,
    recovered_branches,
)
from .datasets import GaussianMixtureSpec, gaussian_mixture_joint
from .exceptions import InfoAnnealError, NonConvergenceError
from .information import ObjectiveKind
from .spectral import detect_bifurcations
from .state import AnnealSchedule, CurveSpec
from .verify import SUITES, run_suites

USAGE_ERROR, NONCONVERGENCE, VERIFY_FAILURE = 2, 3, 4


def _read_config(path: str | None) -> dict:
    """key=value lines; '#' starts a comment. Flags override these values."""
    if path is None:
        return {}
    cfg = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {line!r}")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _resolve(args, cfg: dict, name: str, cast, default):
    val = getattr(args, name, None)
    if val is not None:
        return val
    if name in cfg:
        return cast(cfg[name])
    return default


def _display(value_nats: float, unit: str) -> str:
    if unit == "bits":
        return f"{value_nats / np.log(2):.6f} bits"
    return f"{value_nats:.6f} nats"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infoanneal",
        description="Deterministic annealing, bifurcation structure and "
        "relevance-compression curves for discrete quantizers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-data", help="generate a Gaussian-mixture joint distribution")
    g.add_argument("--components", type=int, default=None)
    g.add_argument("--grid", type=int, nargs=2, metavar=("K_X", "K"), default=None)
    g.add_argument("--sigma", type=float, default=None)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--jitter", type=float, default=None)
    g.add_argument("--out", type=str, required=True)
    g.add_argument("--unit", choices=("nats", "bits"), default="nats")
    g.add_argument("--config", type=str, default=None)

    a = sub.add_parser("anneal", help="sweep beta and record the branch structure")
    a.add_argument("--data", type=str, required=True)
    a.add_argument("--objective", type=str, default=None)
    a.add_argument("--classes", type=int, default=None)
    a.add_argument("--beta-max", type=float, default=None)
    a.add_argument("--step", type=float, default=None)
    a.add_argument("--seed", type=int, default=None)
    a.add_argument("--out", type=str, required=True)
    a.add_argument("--unit", choices=("nats", "bits"), default="nats")
    a.add_argument("--config", type=str, default=None)

    c = sub.add_parser("curve", help="compute the relevance-compression curve")
    c.add_argument("--data", type=str, required=True)
    c.add_argument("--objective", type=str, default=None)
    c.add_argument("--classes", type=int, default=None)
    c.add_argument("--i0-min", type=float, default=None)
    c.add_argument("--i0-max", type=float, default=None)
    c.add_argument("--points", type=int, default=None)
    c.add_argument("--restarts", type=int, default=None)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--out", type=str, required=True)
    c.add_argument("--unit", choices=("nats", "bits"), default="nats")
    c.add_argument("--config", type=str, default=None)

    v = sub.add_parser("verify", help="run numerical property suites")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--data", type=str, default=None)
    v.add_argument("--classes", type=int, default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--config", type=str, default=None)
    return parser


def cmd_gen_data(args) -> int:
    cfg = _read_config(args.config)
    components = _resolve(args, cfg, "components", int, 4)
    grid = args.grid or (
        [int(x) for x in cfg["grid"].split()] if "grid" in cfg else [52, 52]
    )
    sigma = _resolve(args, cfg, "sigma", float, None)
    seed = _resolve(args, cfg, "seed", int, 0)
    jitter = _resolve(args, cfg, "jitter", float, 0.0)
    if components < 1:
        print(f"error: --components must be >= 1, got {components}", file=sys.stderr)
        return USAGE_ERROR
    if components == 4 and sigma is None:
        spec = GaussianMixtureSpec(grid_shape=tuple(grid), rng_seed=seed, jitter=jitter)
    else:
        base = GaussianMixtureSpec.diagonal(
            components, sigma=sigma if sigma is not None else 0.1,
            grid_shape=tuple(grid),
        )
        spec = GaussianMixtureSpec(
            means=base.means, covariances=base.covariances, weights=base.weights,
            grid_shape=base.grid_shape, rng_seed=seed, jitter=jitter,
        )
    p = gaussian_mixture_joint(spec)
    io.save_joint(p, args.out)
    print(f"wrote {p.n_inputs}x{p.n_symbols} joint to {args.out}")
    print(f"I(X;Y) = {_display(p.mutual_information, args.unit)}")
    return 0


def cmd_anneal(args) -> int:
    cfg = _read_config(args.config)
    p = io.load_joint(args.data)
    kind = ObjectiveKind.from_string(_resolve(args, cfg, "objective", str, "information-distortion"))
    n_classes = _resolve(args, cfg, "classes", int, 2)
    schedule = AnnealSchedule(
        beta_max=_resolve(args, cfg, "beta_max", float, 2.0),
        step=_resolve(args, cfg, "step", float, 0.02),
        rng_seed=_resolve(args, cfg, "seed", int, 0),
    )
    result = anneal(kind, p, n_classes, schedule)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_branches_csv(result, out / "branches.csv")
    io.write_summary_json(io.summary_dict(events=result.events), out / "summary.json")
    n_pts = sum(len(br) for br in result.branches)
    print(f"{len(result.branches)} branches, {n_pts} points, "
          f"{len(result.events)} bifurcation events")
    for ev in result.events:
        print(f"  {ev.kind} at beta = {ev.beta:.6f}")
    final = result.branches[-1].points[-1]
    print(f"final I(X;Y_N) = {_display(final.constraint_value, args.unit)}")
    return 0


def cmd_curve(args) -> int:
    cfg = _read_config(args.config)
    p = io.load_joint(args.data)
    kind = ObjectiveKind.from_string(_resolve(args, cfg, "objective", str, "information-distortion"))
    n_classes = _resolve(args, cfg, "classes", int, 2)
    ceiling = information_ceiling(p, n_classes)
    i0_min = _resolve(args, cfg, "i0_min", float, 0.02 * ceiling)
    i0_max = _resolve(args, cfg, "i0_max", float, 0.80 * ceiling)
    n_points = _resolve(args, cfg, "points", int, 30)
    if n_points < 2:
        print(f"error: --points must be >= 2, got {n_points}", file=sys.stderr)
        return USAGE_ERROR
    if not 0 < i0_min < i0_max < ceiling:
        print(
            f"error: need 0 < i0-min < i0-max < {ceiling:.6g} "
            f"(information ceiling for {n_classes} classes)",
            file=sys.stderr,
        )
        return USAGE_ERROR
    spec = CurveSpec(
        i0_min=i0_min, i0_max=i0_max, n_points=n_points, n_classes=n_classes,
        restarts=_resolve(args, cfg, "restarts", int, 8),
        rng_seed=_resolve(args, cfg, "seed", int, 0),
    )
    curve = build_curve(spec, kind, p)
    classify_curve(curve, kind, p)
    report = derivative_report(curve) if len(curve) >= 5 else None
    events = []
    for br in recovered_branches(curve, kind, p):
        events.extend(detect_bifurcations(kind, p, br))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_curve_csv(curve, out / "curve.csv")
    io.write_summary_json(io.summary_dict(events=events, report=report), out / "summary.json")
    print(f"{len(curve)} curve points over I0 in [{i0_min:.6g}, {i0_max:.6g}]")
    if report is not None:
        print(f"max |dR/dI0 + beta| rel err = {report.slope_max_rel_err:.3e}")
        print(f"sign changes of dbeta/dI0 at I0 = {report.sign_changes}")
    return 0


def cmd_verify(args) -> int:
    cfg = _read_config(args.config)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    p = io.load_joint(args.data) if args.data else None
    seed = _resolve(args, cfg, "seed", int, 0)
    n_classes = _resolve(args, cfg, "classes", int, 2)
    results = run_suites(names, p, n_classes=n_classes, seed=seed)
    width = max(len(r.name) for r in results)
    ok = True
    for r in results:
        status = "pass" if r.passed else "FAIL"
        tol = "-" if r.tolerance == float("inf") else f"{r.tolerance:.1e}"
        print(f"{r.name:<{width}}  {r.observed:.3e}  tol {tol:>8}  {status}")
        ok &= r.passed
    return 0 if ok else VERIFY_FAILURE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code) if exc.code else 0
    handlers = {
        "gen-data": cmd_gen_data,
        "anneal": cmd_anneal,
        "curve": cmd_curve,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NONCONVERGENCE
    except (InfoAnnealError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
