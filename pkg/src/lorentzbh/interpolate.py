"""K-functionals and real interpolation norms for sequence couples, the
Lorentz equivalence envelope, and block averaging."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize

from ._rng import make_rng
from .errors import BadParams, MalformedPartition
from .lorentz import lorentz_norm, rearrange

SIMPSON_TOL = 1e-10
SIMPSON_DEPTH = 40


@dataclass(frozen=True)
class InterpParams:
    theta: float
    q: float = 1.0

    def __post_init__(self):
        if not 0 < self.theta < 1:
            raise BadParams(f"theta={self.theta} must lie in (0, 1)")
        if not (self.q >= 1 or self.q == math.inf):
            raise BadParams(f"q={self.q} must be >= 1 or inf")


# -- (l_1, l_inf) ---------------------------------------------------------------


def k_functional(x, t):
    """K(t, x; l_1, l_inf) = integral_0^t x*, piecewise linear in t.

    ``t`` may be a scalar or an array.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise BadParams("K-functional needs t > 0")
    xs = rearrange(x)
    S = np.concatenate([[0.0], np.cumsum(xs), [0.0]])
    xs_pad = np.concatenate([xs, [0.0]])
    fl = np.minimum(np.floor(t_arr).astype(np.int64), xs.size)
    out = S[fl] + (t_arr - fl) * xs_pad[fl]
    return float(out) if out.ndim == 0 else out


def k_functional_oracle(x, t: float) -> float:
    """K(t, x; l_1, l_inf) as a linear program over splittings x = x0 + x1.

    Works on |x| (aligning phases is optimal). Variables are x0 (free),
    u >= |x0| and s >= |x - x0|_inf; minimise sum u + t s.
    """
    a = np.abs(np.asarray(x, dtype=complex)).ravel()
    d = a.size
    if d == 0:
        return 0.0
    # z = (x0[d], u[d], s)
    c = np.concatenate([np.zeros(d), np.ones(d), [t]])
    I = np.eye(d)
    zero = np.zeros((d, 1))
    A = np.block([
        [I, -I, zero],       # x0 - u <= 0
        [-I, -I, zero],      # -x0 - u <= 0
        [-I, np.zeros((d, d)), -np.ones((d, 1))],  # a - x0 <= s
        [I, np.zeros((d, d)), -np.ones((d, 1))],   # x0 - a <= s
    ])
    b = np.concatenate([np.zeros(2 * d), -a, a])
    bounds = [(None, None)] * d + [(0, None)] * d + [(0, None)]
    res = linprog(c, A_ub=A, b_ub=b, bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"K-functional LP failed: {res.message}")
    return float(res.fun)


def _simpson(f, a, b, tol, depth=SIMPSON_DEPTH):
    """Adaptive Simpson quadrature of f on [a, b]."""
    c = 0.5 * (a + b)
    fa, fb, fc = f(a), f(b), f(c)
    whole = (b - a) / 6.0 * (fa + 4 * fc + fb)
    return _simpson_rec(f, a, b, fa, fb, fc, whole, tol, depth)


def _simpson_rec(f, a, b, fa, fb, fc, whole, tol, depth):
    c = 0.5 * (a + b)
    d, e = 0.5 * (a + c), 0.5 * (c + b)
    fd, fe = f(d), f(e)
    left = (c - a) / 6.0 * (fa + 4 * fd + fc)
    right = (b - c) / 6.0 * (fc + 4 * fe + fb)
    if depth <= 0 or abs(left + right - whole) <= 15 * tol:
        return left + right + (left + right - whole) / 15.0
    return (_simpson_rec(f, a, c, fa, fc, fd, left, tol / 2, depth - 1)
            + _simpson_rec(f, c, b, fc, fb, fe, right, tol / 2, depth - 1))


def real_interp_norm(x, params: InterpParams) -> float:
    """||x||_{theta,q} for the couple (l_1, l_inf).

    K is linear on every [k-1, k]; the integral is split into the closed-form
    head on [0, 1], adaptive Simpson on each interior unit segment, and the
    closed-form tail beyond the support size T where K = ||x||_1.
    """
    theta, q = params.theta, params.q
    xs = rearrange(x)
    xs = xs[xs > 0]
    T = xs.size
    if T == 0:
        return 0.0
    S = np.concatenate([[0.0], np.cumsum(xs)])
    if q == math.inf:
        # t^{-theta} (A + B t) on each segment: endpoints and the interior critical point
        cands = [xs[0]]
        for k in range(2, T + 1):
            A = S[k - 1] - (k - 1) * xs[k - 1]
            B = xs[k - 1]
            ts = [float(k)]
            # subnormal B puts the critical point far outside the segment
            if A > 0 and (1 - theta) * B * k > theta * A:
                tc = theta * A / ((1 - theta) * B)
                if k - 1 < tc < k:
                    ts.append(tc)
            cands.extend(t ** -theta * (A + B * t) for t in ts)
        return float(max(cands))
    scale = xs[0]
    total = (xs[0] / scale) ** q / ((1 - theta) * q)
    for k in range(2, T + 1):
        A = (S[k - 1] - (k - 1) * xs[k - 1]) / scale
        B = xs[k - 1] / scale

        def f(t, A=A, B=B):
            return (t ** -theta * (A + B * t)) ** q / t

        mag = f(k - 1.0)
        total += _simpson(f, k - 1.0, float(k), SIMPSON_TOL * max(mag, 1e-300))
    total += (S[T] / scale) ** q * T ** (-theta * q) / (theta * q)
    return float(scale * total ** (1.0 / q))


def interp_sandwich(x, p: float, q: float) -> dict:
    """Compare ||x||_{p,q} with the (l_1, l_inf) interpolation norms at theta = 1 - 1/p.

    Reports both readings of the two-sided estimate (upper index q or p) and
    the sharp form (1/p')(q/p)^{1/q} I_q <= ||x||_{p,q} <= (q/p)^{1/q} I_q.
    """
    if not 1 < p < math.inf:
        raise BadParams(f"p={p} must lie in (1, inf)")
    theta = 1.0 - 1.0 / p
    conj = p / (p - 1)
    lor = lorentz_norm(x, p, q)
    I_q = real_interp_norm(x, InterpParams(theta, q))
    I_p = real_interp_norm(x, InterpParams(theta, p))
    c = (q / p) ** (1.0 / q) if q != math.inf else 1.0
    tol = 1e-9
    return {
        "lorentz": lor,
        "interp_q": I_q,
        "interp_p": I_p,
        "lower_holds": I_q / conj <= lor * (1 + tol),
        "upper_q_holds": lor <= I_q * (1 + tol),
        "upper_p_holds": lor <= I_p * (1 + tol),
        "sharp_lower_holds": c * I_q / conj <= lor * (1 + tol),
        "sharp_upper_holds": lor <= c * I_q * (1 + tol),
    }


# -- (l_1, l_2) -----------------------------------------------------------------


def k_functional_l1_l2(x, t: float) -> float:
    """K(t, x; l_1, l_2), exact.

    The minimiser of ||x - y||_1 + t||y||_2 is y = min(|x|, c) for a level c.
    With k entries above c the objective is S_k - k c + t sqrt(k c^2 + T_k)
    (S_k top-k sum, T_k tail sum of squares), convex in c on [x*_{k+1}, x*_k].
    Each piece is minimised in closed form and the best piece wins.
    """
    if t <= 0:
        raise BadParams("K-functional needs t > 0")
    xs = rearrange(x)
    xs = xs[xs > 0]
    s = xs.size
    if s == 0:
        return 0.0
    S = np.concatenate([[0.0], np.cumsum(xs)])
    sq = xs**2
    T = np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]])  # T[k] = sum_{i>k} x*_i^2
    best = t * math.sqrt(T[0])  # k = 0: y = x
    for k in range(1, s + 1):
        lo = xs[k] if k < s else 0.0
        hi = xs[k - 1]
        if t * t > k:
            c = math.sqrt(T[k] / (t * t - k)) if T[k] > 0 else 0.0
            c = min(max(c, lo), hi)
        else:
            c = hi
        val = S[k] - k * c + t * math.sqrt(k * c * c + T[k])
        best = min(best, val)
    return float(best)


def k_functional_l1_l2_oracle(x, t: float, starts: int = 4, seed: int = 0) -> float:
    """Direct minimisation over splittings (bounded quasi-Newton); test oracle only."""
    a = np.abs(np.asarray(x, dtype=complex)).ravel()
    if not a.any():
        return 0.0

    def obj(y):
        nrm = math.sqrt(float(y @ y))
        g = -np.ones_like(y) + (t * y / nrm if nrm > 0 else 0.0)
        return float(np.sum(a - y) + t * nrm), g

    best = min(float(a.sum()), t * float(np.linalg.norm(a)))
    for s in range(starts):
        y0 = a * make_rng(seed, s).random(a.size)
        res = minimize(obj, y0, jac=True, method="L-BFGS-B", bounds=list(zip(np.zeros_like(a), a)),
                       options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 2000})
        best = min(best, float(res.fun))
    return best


def real_interp_norm_l1_l2(x, params: InterpParams) -> float:
    """||x||_{theta,q} for the couple (l_1, l_2).

    K = t||x||_2 for t <= ||x||_2/x*_1 and K = ||x||_1 for t >= sqrt(s), both
    integrated in closed form; the middle range is integrated by adaptive
    Simpson on pieces split at sqrt(k).
    """
    theta, q = params.theta, params.q
    xs = rearrange(x)
    xs = xs[xs > 0]
    s = xs.size
    if s == 0:
        return 0.0
    # K is homogeneous in x: work with x / x*_1 and rescale at the end
    scale = float(xs[0])
    xs = xs / scale
    l1, l2 = float(xs.sum()), float(np.linalg.norm(xs))
    t0, t1 = l2 / xs[0], math.sqrt(s)

    def g(t):
        return t ** -theta * k_functional_l1_l2(xs, t)

    if q == math.inf:
        ts = np.linspace(t0, t1, 2001) if t1 > t0 else np.array([t0])
        return float(scale * max(max(g(t) for t in ts), t0 ** (1 - theta) * l2))
    total = l2**q * t0 ** ((1 - theta) * q) / ((1 - theta) * q)
    total += l1**q * t1 ** (-theta * q) / (theta * q)
    if t1 > t0:
        cuts = [t0] + [math.sqrt(k) for k in range(1, s) if t0 < math.sqrt(k) < t1] + [t1]
        for a, b in zip(cuts[:-1], cuts[1:]):
            f = lambda t: g(t) ** q / t  # noqa: E731
            total += _simpson(f, a, b, SIMPSON_TOL * max(f(a), 1e-300))
    return float(scale * total ** (1.0 / q))


# -- Lorentz envelope -------------------------------------------------------------


@dataclass
class EnvelopeReport:
    p: float
    lorentz: float
    interp: float
    lower_factor: float
    upper_factor: float

    @property
    def implied_constant(self) -> float:
        """Smallest C with C^{-1} F_lo ||x||_{p,q} <= I <= C F_hi ||x||_{p,q}."""
        if self.lorentz == 0:
            return 1.0
        return max(self.lower_factor * self.lorentz / self.interp, self.interp / (self.upper_factor * self.lorentz))

    def to_dict(self) -> dict:
        return {"p": self.p, "lorentz": self.lorentz, "interp": self.interp, "lower_factor": self.lower_factor,
                "upper_factor": self.upper_factor, "implied_constant": self.implied_constant}


_COUPLES = {(1.0, math.inf): real_interp_norm, (1.0, 2.0): real_interp_norm_l1_l2}


def envelope_factors(p0, p1, theta, q) -> tuple:
    p = 1.0 / ((1 - theta) / p0 + theta / p1)
    iq = 0.0 if q == math.inf else 1.0 / q
    i0, i1 = 1.0 / p0, 1.0 / p1
    pq = 1.0 if q == math.inf else (p / q) ** iq
    lo = theta ** -min(iq, i0) * (1 - theta) ** -min(iq, i1) * pq
    hi = theta ** -max(iq, i0) * (1 - theta) ** -max(iq, i1) * pq
    return p, lo, hi


def check_lorentz_envelope(x, p0: float, p1: float, theta: float, q: float) -> EnvelopeReport:
    """Both sides of the two-sided (l_p0, l_p1)_{theta,q} ~ l_{p,q} estimate.

    Supported couples: (1, inf) and (1, 2).
    """
    if p0 == p1:
        raise BadParams("p0 and p1 must differ")
    params = InterpParams(theta, q)
    key = (float(p0), float(p1))
    if key not in _COUPLES:
        raise BadParams(f"couple (l_{p0}, l_{p1}) is not supported")
    p, lo, hi = envelope_factors(p0, p1, theta, q)
    return EnvelopeReport(p, lorentz_norm(x, p, q), _COUPLES[key](x, params), lo, hi)


# -- block averaging ---------------------------------------------------------------


def _check_partition(partition, size):
    seen = np.zeros(size, dtype=int)
    for block in partition:
        block = np.asarray(block, dtype=np.int64)
        if block.size == 0 or block.min() < 0 or block.max() >= size:
            raise MalformedPartition(f"block {block.tolist()} is empty or out of range 0..{size - 1}")
        np.add.at(seen, block, 1)
    if not np.all(seen == 1):
        raise MalformedPartition("blocks must be disjoint and cover every position")


def block_average(x, partition) -> np.ndarray:
    """Replace x on each block (0-based positions) by its mean."""
    x = np.asarray(x, dtype=complex if np.iscomplexobj(x) else float).ravel()
    _check_partition(partition, x.size)
    out = np.empty_like(x)
    for block in partition:
        block = np.asarray(block, dtype=np.int64)
        out[block] = x[block].mean()
    return out


def block_average_checks(x, partition, ts=None) -> dict:
    """Contractivity of block averaging on l_1, l_inf and on K(t, . ; l_1, l_inf)."""
    x = np.asarray(x).ravel()
    Px = block_average(x, partition)
    if ts is None:
        ts = np.arange(1, 2 * x.size + 1) * 0.5
    tol = 1e-12 * max(float(np.abs(x).sum()), 1e-300)
    Kx, KPx = k_functional(x, ts), k_functional(Px, ts)
    return {
        "l1": float(np.abs(Px).sum()) <= float(np.abs(x).sum()) + tol,
        "linf": float(np.abs(Px).max(initial=0)) <= float(np.abs(x).max(initial=0)) + tol,
        "K": bool(np.all(KPx <= Kx + tol)),
        "max_K_gap": float(np.max(KPx - Kx)),
    }
