# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: multilinear contraction, alternating phase ascent and the
torus grid oracle. Semantics mirror ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, M_PI, INFINITY

cnp.import_array()


cdef inline double cmod(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef void _contract(const double complex[::1] a, int m, int n,
                    const double complex[:, ::1] X, int k,
                    double complex[::1] g, long[::1] idx) noexcept nogil:
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t t
    cdef int c
    cdef double complex prod
    for c in range(m):
        total *= n
        idx[c] = 0
    for c in range(n):
        g[c] = 0
    for t in range(total):
        prod = a[t]
        if prod.real != 0 or prod.imag != 0:
            for c in range(m):
                if c != k:
                    prod = prod * X[c, idx[c]]
            g[idx[k]] += prod
        # odometer over the C-order multi-index
        c = m - 1
        while c >= 0:
            idx[c] += 1
            if idx[c] < n:
                break
            idx[c] = 0
            c -= 1


def contract_except(a_flat, int m, int n, X, int k):
    cdef const double complex[::1] a = np.ascontiguousarray(a_flat, dtype=complex)
    cdef const double complex[:, ::1] Xv = np.ascontiguousarray(X, dtype=complex)
    g = np.zeros(n, dtype=complex)
    idx = np.zeros(max(m, 1), dtype=np.int_)
    _contract(a, m, n, Xv, k, g, idx)
    return g


def alternating_ascent(a_flat, int m, int n, X0, int max_sweeps, double tol):
    cdef const double complex[::1] a = np.ascontiguousarray(a_flat, dtype=complex)
    Xarr = np.array(X0, dtype=complex, order="C", copy=True)
    cdef double complex[:, ::1] X = Xarr
    garr = np.zeros(n, dtype=complex)
    cdef double complex[::1] g = garr
    cdef long[::1] idx = np.zeros(max(m, 1), dtype=np.int_)
    cdef double value, new, start, mag, min_gain = INFINITY, gain
    cdef double complex s
    cdef int sweeps = 0, k, l
    with nogil:
        _contract(a, m, n, X, 0, g, idx)
        s = 0
        for l in range(n):
            s += g[l] * X[0, l]
        value = cmod(s)
        while sweeps < max_sweeps:
            sweeps += 1
            start = value
            for k in range(m):
                _contract(a, m, n, X, k, g, idx)
                new = 0
                for l in range(n):
                    mag = cmod(g[l])
                    new += mag
                    if mag > 0:
                        X[k, l] = g[l].conjugate() / mag
                    else:
                        X[k, l] = 1
                gain = (new - value) / (value if value > 1e-300 else 1e-300)
                if gain < min_gain:
                    min_gain = gain
                value = new
            if value - start <= tol * value:
                break
    return value, Xarr, sweeps, min_gain


def poly_grid(exps, coeffs, int G):
    cdef const long[:, ::1] E = np.ascontiguousarray(exps, dtype=np.int_)
    cdef const double complex[::1] c = np.ascontiguousarray(coeffs, dtype=complex)
    cdef int count = E.shape[0], n = E.shape[1], free = n - 1
    cdef int a, j, jj, deg = 0
    cdef double complex total
    if free == 0:
        total = 0
        for a in range(count):
            total += c[a]
        return cmod(total), 0, cmod(total)
    for a in range(count):
        j = 0
        for jj in range(n):
            j += E[a, jj]
        if j > deg:
            deg = j
    cdef double h2 = M_PI / G
    cdef double hess = 0, ab
    for a in range(count):
        ab = cmod(c[a])
        for j in range(1, n):
            for jj in range(1, n):
                hess += ab * E[a, j] * E[a, jj]
    cdef double remainder = 0.5 * h2 * h2 * hess
    parr = np.empty((G, deg + 1), dtype=complex)
    cdef double complex[:, ::1] pw = parr
    cdef int gg, e
    for gg in range(G):
        for e in range(deg + 1):
            pw[gg, e] = cos(2.0 * M_PI * gg * e / G) + 1j * sin(2.0 * M_PI * gg * e / G)
    cdef Py_ssize_t total_pts = 1, t, best = 0
    for j in range(free):
        total_pts *= G
    cdef long[::1] pos = np.zeros(free, dtype=np.int_)
    dbuf = np.zeros(free, dtype=complex)
    cdef double complex[::1] d = dbuf
    cdef double complex term, P
    cdef double absP, best_abs = -1.0, upper = 0.0, cell
    with nogil:
        for t in range(total_pts):
            P = 0
            for j in range(free):
                d[j] = 0
            for a in range(count):
                term = c[a]
                for j in range(free):
                    term = term * pw[pos[j], E[a, j + 1]]
                P += term
                for j in range(free):
                    if E[a, j + 1] != 0:
                        d[j] += (1j * E[a, j + 1]) * term
            absP = cmod(P)
            cell = 0
            for j in range(free):
                cell += cmod(d[j])
            cell = absP + h2 * cell
            if absP > best_abs:
                best_abs = absP
                best = t
            if cell > upper:
                upper = cell
            j = free - 1
            while j >= 0:
                pos[j] += 1
                if pos[j] < G:
                    break
                pos[j] = 0
                j -= 1
    return best_abs, best, upper + remainder
