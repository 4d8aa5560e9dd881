"""File formats: joint-distribution CSV, result CSVs and the JSON summary.

Joint distribution file: first line ``K_X,K`` (the two dimensions), then
K_X rows of K comma-separated probabilities. All numbers are written with
17 significant digits, so a save/load round trip reproduces the in-memory
values bit for bit.

Result schemas (one row per point):

* branches CSV: ``beta,branch_id,I_xyn,G,kkt_residual,solves_lagrangian,solves_constrained``
* curve CSV:    ``I0,R,beta,branch_id,kkt_residual``

The JSON summary carries ``bifurcations`` (a list of ``{beta, kind}``
objects) and, for curve runs, ``theorem3`` with the derivative-identity
check ``{max_rel_err, sign_changes}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .exceptions import DataFormatError
from .information import JointDistribution
from .state import AnnealResult, BifurcationEvent, CurveDerivativeReport, CurvePoint


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def save_joint(p: JointDistribution, path) -> None:
    """Write a joint distribution in the matrix CSV format."""
    lines = [f"{p.n_inputs},{p.n_symbols}"]
    for row in p.pxy:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_joint(path) -> JointDistribution:
    """Read a joint distribution, rejecting malformed or invalid data."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataFormatError(f"{path}: empty file")
    header = lines[0].split(",")
    if len(header) != 2:
        raise DataFormatError(f"{path}: header must be 'K_X,K', got {lines[0]!r}")
    try:
        kx, k = int(header[0]), int(header[1])
    except ValueError:
        raise DataFormatError(f"{path}: non-integer dimensions in header {lines[0]!r}")
    if len(lines) - 1 != kx:
        raise DataFormatError(f"{path}: expected {kx} data rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:]):
        vals = ln.split(",")
        if len(vals) != k:
            raise DataFormatError(f"{path}: row {i} has {len(vals)} columns, expected {k}")
        try:
            rows.append([float(v) for v in vals])
        except ValueError:
            raise DataFormatError(f"{path}: non-numeric value in row {i}")
    return JointDistribution(np.array(rows))


BRANCH_COLUMNS = "beta,branch_id,I_xyn,G,kkt_residual,solves_lagrangian,solves_constrained"
CURVE_COLUMNS = "I0,R,beta,branch_id,kkt_residual"


def _bool_field(value) -> str:
    if value is None:
        return ""
    return "true" if value else "false"


def write_branches_csv(result: AnnealResult, path) -> None:
    """One row per branch point, header-only when there are no points."""
    lines = [BRANCH_COLUMNS]
    for br in result.branches:
        for sp in br.points:
            cls = sp.classification
            lines.append(",".join([
                _fmt(sp.beta),
                str(br.branch_id),
                _fmt(sp.constraint_value),
                _fmt(sp.objective_value),
                _fmt(sp.kkt_residual),
                _bool_field(cls.solves_lagrangian if cls else None),
                _bool_field(cls.solves_constrained if cls else None),
            ]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_curve_csv(curve: list[CurvePoint], path) -> None:
    """One row per curve point in ascending I0 order."""
    lines = [CURVE_COLUMNS]
    for cp in curve:
        lines.append(",".join([
            _fmt(cp.i0), _fmt(cp.value), _fmt(cp.beta),
            str(cp.branch_id), _fmt(cp.kkt_residual),
        ]))
    Path(path).write_text("\n".join(lines) + "\n")


def bifurcation_records(events: list[BifurcationEvent]) -> list[dict]:
    return [{"beta": ev.beta, "kind": ev.kind} for ev in events]


def summary_dict(
    events: list[BifurcationEvent] | None = None,
    report: CurveDerivativeReport | None = None,
) -> dict:
    """Assemble the JSON summary payload."""
    out: dict = {"bifurcations": bifurcation_records(events or [])}
    if report is not None:
        out["theorem3"] = {
            "max_rel_err": report.slope_max_rel_err,
            "sign_changes": list(report.sign_changes),
        }
    return out


def write_summary_json(summary: dict, path) -> None:
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


def load_summary_json(path) -> dict:
    return json.loads(Path(path).read_text())
