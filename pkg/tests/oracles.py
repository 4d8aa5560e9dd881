"""Independent reference implementations used to pin expected values.

Everything here is written directly from the definitions with explicit
loops or exhaustive enumeration, deliberately sharing no code with the
package internals it checks.
"""

import math

import numpy as np


def mi_xyn_oracle(pxy, q):
    """I(X;Y_N) by direct double sum over the induced joint."""
    kx, k = pxy.shape
    n = q.shape[0]
    px = [sum(pxy[i][kk] for kk in range(k)) for i in range(kx)]
    pn = [sum(sum(pxy[i][kk] for i in range(kx)) * q[nu][kk] for kk in range(k))
          for nu in range(n)]
    total = 0.0
    for i in range(kx):
        for nu in range(n):
            pin = sum(pxy[i][kk] * q[nu][kk] for kk in range(k))
            if pin > 0:
                total += pin * math.log(pin / (px[i] * pn[nu]))
    return total


def mi_yyn_oracle(pxy, q):
    """I(Y;Y_N) by direct double sum."""
    kx, k = pxy.shape
    n = q.shape[0]
    py = [sum(pxy[i][kk] for i in range(kx)) for kk in range(k)]
    pn = [sum(py[kk] * q[nu][kk] for kk in range(k)) for nu in range(n)]
    total = 0.0
    for kk in range(k):
        for nu in range(n):
            joint = py[kk] * q[nu][kk]
            if joint > 0:
                total += joint * math.log(joint / (py[kk] * pn[nu]))
    return total


def cond_entropy_oracle(pxy, q):
    """H(Y_N|Y) by direct double sum."""
    kx, k = pxy.shape
    n = q.shape[0]
    py = [sum(pxy[i][kk] for i in range(kx)) for kk in range(k)]
    total = 0.0
    for kk in range(k):
        for nu in range(n):
            if q[nu][kk] > 0:
                total -= py[kk] * q[nu][kk] * math.log(q[nu][kk])
    return total


def tangent_fd_gradient(f, q, h=1e-6):
    """Central differences of f restricted to the simplex tangent space.

    Entry (nu, k) is the derivative along the direction e_{nu k} minus its
    column mean, which equals the tangent projection of the gradient.
    """
    n, k = q.shape
    out = np.zeros((n, k))
    for nu in range(n):
        for kk in range(k):
            v = np.zeros((n, k))
            v[nu, kk] = 1.0
            v[:, kk] -= 1.0 / n
            out[nu, kk] = (f(q + h * v) - f(q - h * v)) / (2 * h)
    return out


def fd_hessian_of_gradient(grad, q, h=1e-6):
    """Coordinate-wise central differences of a gradient field, as a matrix."""
    n, k = q.shape
    nk = n * k
    out = np.zeros((nk, nk))
    for idx in range(nk):
        nu, kk = divmod(idx, k)
        e = np.zeros((n, k))
        e[nu, kk] = h
        out[:, idx] = ((grad(q + e) - grad(q - e)) / (2 * h)).reshape(nk)
    return out


def second_eigenvalue_beta(pxy):
    """First crossing beta of the uniform distortion branch, via the
    second-largest eigenvalue of the symmetrized two-step channel.

    Independent of the Hessian/kernel machinery: builds
    B_kl = sum_i p(x_i,y_k) p(x_i,y_l) / p(x_i), symmetrizes by
    D^{-1/2} B D^{-1/2} with D = diag(p_k), and returns 1 / lambda_2.
    """
    pxy = np.asarray(pxy, dtype=float)
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    B = (pxy / px[:, None]).T @ pxy
    S = B / np.sqrt(np.outer(py, py))
    w = np.linalg.eigvalsh(S)
    return 1.0 / w[-2]


def _binary_entropy(a):
    out = np.zeros_like(a)
    m = (a > 0) & (a < 1)
    am = a[m]
    out[m] = -am * np.log(am) - (1 - am) * np.log(1 - am)
    return out


def grid_search_rh_n2(pxy, i0, step=0.005, window=2e-3):
    """Exhaustive grid search for R_H(i0) with N = 2 classes.

    Enumerates the first-class row a_k on a regular grid per symbol
    (the second row is 1 - a_k), keeps quantizers with
    |I(X;Y_N) - i0| < window, and returns the maximal H(Y_N|Y), or None
    when no grid point is feasible. Chunked over the first coordinate to
    bound memory.
    """
    pxy = np.asarray(pxy, dtype=float)
    kx, k = pxy.shape
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    g = np.round(np.arange(0.0, 1.0 + step / 2, step), 10)
    rest = [g] * (k - 1)
    mesh = np.meshgrid(*rest, indexing="ij")
    rest_flat = np.stack([m.reshape(-1) for m in mesh], axis=0)  # (k-1, M)
    best = -np.inf
    for a0 in g:
        a = np.vstack([np.full(rest_flat.shape[1], a0), rest_flat])  # (k, M)
        pn1 = py @ a
        pxn1 = pxy @ a  # (kx, M)
        pxn2 = px[:, None] - pxn1
        pn2 = 1.0 - pn1
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = np.where(pxn1 > 0, pxn1 * np.log(
                np.where(pxn1 > 0, pxn1, 1.0)
                / np.clip(px[:, None] * pn1[None, :], 1e-300, None)), 0.0)
            t2 = np.where(pxn2 > 0, pxn2 * np.log(
                np.where(pxn2 > 0, pxn2, 1.0)
                / np.clip(px[:, None] * pn2[None, :], 1e-300, None)), 0.0)
        i_vals = t1.sum(axis=0) + t2.sum(axis=0)
        feasible = np.abs(i_vals - i0) < window
        if np.any(feasible):
            h_vals = py @ _binary_entropy(a[:, feasible])
            best = max(best, float(h_vals.max()))
    return None if best == -np.inf else best


def grid_search_max_i_n2(pxy, step=0.01):
    """Exhaustive grid maximum of I(X;Y_N) for N = 2 classes."""
    pxy = np.asarray(pxy, dtype=float)
    kx, k = pxy.shape
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    g = np.round(np.arange(0.0, 1.0 + step / 2, step), 10)
    rest = [g] * (k - 1)
    mesh = np.meshgrid(*rest, indexing="ij")
    rest_flat = np.stack([m.reshape(-1) for m in mesh], axis=0)
    best = -np.inf
    for a0 in g:
        a = np.vstack([np.full(rest_flat.shape[1], a0), rest_flat])
        pn1 = py @ a
        pxn1 = pxy @ a
        pxn2 = px[:, None] - pxn1
        pn2 = 1.0 - pn1
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = np.where(pxn1 > 0, pxn1 * np.log(
                np.where(pxn1 > 0, pxn1, 1.0)
                / np.clip(px[:, None] * pn1[None, :], 1e-300, None)), 0.0)
            t2 = np.where(pxn2 > 0, pxn2 * np.log(
                np.where(pxn2 > 0, pxn2, 1.0)
                / np.clip(px[:, None] * pn2[None, :], 1e-300, None)), 0.0)
        i_vals = t1.sum(axis=0) + t2.sum(axis=0)
        best = max(best, float(i_vals.max()))
    return best


def nonuniform_centered_derivative(x0, x1, x2, f0, f1, f2):
    """Derivative at x1 of the quadratic through three points."""
    h1, h2 = x1 - x0, x2 - x1
    return (h1 * h1 * f2 + (h2 * h2 - h1 * h1) * f1 - h2 * h2 * f0) / (
        h1 * h2 * (h1 + h2)
    )
