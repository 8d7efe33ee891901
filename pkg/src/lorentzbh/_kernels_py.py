"""Pure-NumPy implementations of the hot kernels.

Signatures and semantics match the compiled ``_kernels`` module exactly;
``kernels.py`` picks one at import time.
"""
import math

import numpy as np


def contract_except(a_flat, m, n, X, k):
    """g_l = sum_{i: i_k = l} a_i prod_{c != k} X[c, i_c]."""
    res = np.asarray(a_flat, dtype=complex).reshape((n,) * m)
    # contract from the last axis down so lower axis positions stay valid
    for c in range(m - 1, -1, -1):
        if c != k:
            res = np.tensordot(res, X[c], axes=([c], [0]))
    return res


def _phase(g):
    mag = np.abs(g)
    out = np.ones_like(g)
    nz = mag > 0
    out[nz] = np.conj(g[nz]) / mag[nz]
    return out


def alternating_ascent(a_flat, m, n, X0, max_sweeps, tol):
    """Block-coordinate phase ascent for |sum a_i x^1_{i_1}...x^m_{i_m}| on the polytorus.

    With every argument but x^k fixed the form is linear in x^k with
    coefficient vector g, maximised by x^k = conj(g)/|g| at value ||g||_1.
    Returns ``(value, X, sweeps, min_rel_gain)``; ``min_rel_gain`` is the
    smallest relative change over all half-steps (negative means a decrease).
    """
    X = np.array(X0, dtype=complex, copy=True)
    a_flat = np.asarray(a_flat, dtype=complex)
    g = contract_except(a_flat, m, n, X, 0)
    value = abs(np.dot(g, X[0]))
    min_gain = math.inf
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        start = value
        for k in range(m):
            g = contract_except(a_flat, m, n, X, k)
            X[k] = _phase(g)
            new = float(np.sum(np.abs(g)))
            min_gain = min(min_gain, (new - value) / max(value, 1e-300))
            value = new
        if value - start <= tol * value:
            break
    return value, X, sweeps, min_gain


def _power_tables(free_n, m, G):
    theta = 2.0 * math.pi * np.arange(G) / G
    e = np.arange(m + 1)
    return np.exp(1j * np.outer(theta, e))  # (G, m+1)


def poly_grid(exps, coeffs, G):
    """Evaluate P(z) = sum_a c_a z^a on the grid z_1 = 1, z_j = exp(2 pi i g_j / G).

    Returns ``(best_abs, best_flat, cell_upper)``: the grid maximum of |P|,
    its flat position in the (G,)*(n-1) grid, and a certified upper bound for
    sup |P| on the torus from a second-order Taylor bound on every grid cell.
    """
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=complex)
    count, n = exps.shape
    free = n - 1
    if free == 0:
        val = abs(coeffs.sum())
        return val, 0, val
    m = int(exps.sum(axis=1).max())
    pw = _power_tables(free, m, G)
    h2 = math.pi / G  # half the grid spacing
    ab = np.abs(coeffs)
    fe = exps[:, 1:].astype(float)
    hess = float(np.einsum("a,aj,ak->", ab, fe, fe))
    remainder = 0.5 * h2 * h2 * hess
    shape = (G,) * free
    P = np.zeros(shape, dtype=complex)
    dP = [np.zeros(shape, dtype=complex) for _ in range(free)]
    for a in range(count):
        term = coeffs[a]
        for j in range(free):
            sl = [np.newaxis] * free
            sl[j] = slice(None)
            term = term * pw[:, exps[a, j + 1]][tuple(sl)]
        P += term
        for j in range(free):
            if exps[a, j + 1]:
                dP[j] += (1j * exps[a, j + 1]) * term
    absP = np.abs(P)
    best = int(np.argmax(absP))
    grad = np.zeros(shape)
    for d in dP:
        grad += np.abs(d)
    upper = float(np.max(absP + h2 * grad)) + remainder
    return float(absP.ravel()[best]), best, upper
