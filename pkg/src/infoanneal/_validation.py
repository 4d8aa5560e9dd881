"""Input validation helpers shared by the library and the estimators."""

from __future__ import annotations

import numpy as np

from .exceptions import DataFormatError, DimensionMismatchError

# Total probability mass must match 1 this closely.
MASS_ATOL = 1e-12
# Quantizer columns must be this close to stochastic.
COLUMN_ATOL = 1e-12


def check_joint_matrix(pxy, *, atol: float = MASS_ATOL) -> np.ndarray:
    """Validate a joint probability matrix p(x_i, y_k).

    Checks: 2-D, finite, non-negative entries, total mass 1 within `atol`,
    and strictly positive column marginals p_k (a symbol that never occurs
    cannot be quantized). Returns a float64 copy.
    """
    p = np.asarray(pxy, dtype=float)
    if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
        raise DataFormatError(f"joint distribution must be a 2-D matrix, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise DataFormatError("joint distribution contains non-finite entries")
    if np.any(p < 0):
        i, k = np.unravel_index(np.argmin(p), p.shape)
        raise DataFormatError(
            f"negative probability {p[i, k]:.6g} at row {i}, column {k}"
        )
    total = float(p.sum())
    if abs(total - 1.0) > atol:
        raise DataFormatError(f"joint distribution sums to {total:.12g}, expected 1")
    py = p.sum(axis=0)
    if np.any(py <= 0):
        k = int(np.argmin(py))
        raise DataFormatError(f"column {k} has zero marginal mass p_k")
    return p.copy()


def check_quantizer(q, *, n_symbols: int | None = None, atol: float = COLUMN_ATOL) -> np.ndarray:
    """Validate a column-stochastic quantizer q(class | symbol).

    Shape is (n_classes, n_symbols); every column must sum to 1 within
    `atol` and entries must be non-negative. Returns a float64 copy.
    """
    q = np.asarray(q, dtype=float)
    if q.ndim != 2 or q.shape[0] < 1:
        raise DataFormatError(f"quantizer must be a 2-D matrix, got shape {q.shape}")
    if n_symbols is not None and q.shape[1] != n_symbols:
        raise DimensionMismatchError(
            f"quantizer has {q.shape[1]} columns, joint distribution has {n_symbols} symbols"
        )
    if not np.all(np.isfinite(q)):
        raise DataFormatError("quantizer contains non-finite entries")
    if np.any(q < 0):
        raise DataFormatError("quantizer contains negative entries")
    colsums = q.sum(axis=0)
    bad = np.abs(colsums - 1.0) > atol
    if np.any(bad):
        k = int(np.argmax(np.abs(colsums - 1.0)))
        raise DataFormatError(
            f"quantizer column {k} sums to {colsums[k]:.12g}, expected 1"
        )
    return q.copy()


def check_pair(p, q) -> None:
    """Raise unless quantizer `q` has one column per symbol of `p`."""
    if q.shape[1] != p.pxy.shape[1]:
        raise DimensionMismatchError(
            f"quantizer has {q.shape[1]} columns, joint distribution has "
            f"{p.pxy.shape[1]} symbols"
        )
