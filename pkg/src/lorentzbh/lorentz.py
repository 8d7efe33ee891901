"""Rearrangement-invariant sequence norms: Lorentz l_{p,q}, weak l_{p,inf},
the Marcinkiewicz norm, fundamental functions and weighted l_1."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import BadParams, WeightDomainError

TELESCOPING = "telescoping"
POWER = "power"


@dataclass(frozen=True)
class LorentzParams:
    p: float
    q: float = 1.0
    scheme: str = TELESCOPING

    def __post_init__(self):
        _check_exponents(self.p, self.q, self.scheme)

    @property
    def conjugate(self) -> float:
        """p' = p/(p-1); infinite for p = 1."""
        return math.inf if self.p == 1 else self.p / (self.p - 1)

    @property
    def theta(self) -> float:
        return 1.0 - 1.0 / self.p

    def norm(self, x) -> float:
        return lorentz_norm(x, self.p, self.q, self.scheme)

    def fundamental(self, N: int) -> float:
        return fundamental_function(self, N)


def _check_exponents(p, q, scheme=TELESCOPING):
    if not (1 <= p < math.inf):
        raise BadParams(f"Lorentz exponent p={p} must lie in [1, inf)")
    if not (q >= 1 or q == math.inf):
        raise BadParams(f"Lorentz fine index q={q} must be >= 1 or inf")
    if scheme not in (TELESCOPING, POWER):
        raise BadParams(f"unknown Lorentz scheme {scheme!r}")


def rearrange(x) -> np.ndarray:
    """Non-increasing rearrangement x* of |x|."""
    a = np.abs(np.asarray(x)).ravel()
    return np.sort(a)[::-1]


def lorentz_norm(x, p: float, q: float = 1.0, scheme: str = TELESCOPING) -> float:
    """||x||_{p,q}.

    ``telescoping``: (sum_k x*_k^q (k^{q/p} - (k-1)^{q/p}))^{1/q}, which is the
    counting-measure L_{p,q} norm and equals N^{1/p} on N-atom indicators.
    ``power``: (sum_k k^{q/p - 1} x*_k^q)^{1/q}. For q = inf both give
    sup_k k^{1/p} x*_k.
    """
    _check_exponents(p, q, scheme)
    xs = rearrange(x)
    if xs.size == 0 or xs[0] == 0:
        return 0.0
    k = np.arange(1, xs.size + 1, dtype=float)
    if q == math.inf:
        return float(np.max(k ** (1.0 / p) * xs))
    # scale out x*_1 so large/small inputs do not overflow in the q-th power
    scale = xs[0]
    u = (xs / scale) ** q
    if scheme == TELESCOPING:
        # Abel summation of the telescoping weights: every term is >= 0 and the
        # indicator identity phi(N) = N^{1/p} holds to the last bit
        du = u - np.append(u[1:], 0.0)
        s = np.sum(du * k ** (q / p))
    else:
        s = np.sum(k ** (q / p - 1.0) * u)
    return float(scale * s ** (1.0 / q))


def weak_norm(x, p: float) -> float:
    return lorentz_norm(x, p, math.inf)


def lp_norm(x, p: float) -> float:
    a = np.abs(np.asarray(x)).ravel()
    if p == math.inf:
        return float(a.max(initial=0.0))
    if p < 1:
        raise BadParams(f"l_p exponent p={p} < 1")
    if a.size == 0:
        return 0.0
    scale = a.max()
    if scale == 0:
        return 0.0
    return float(scale * np.sum((a / scale) ** p) ** (1.0 / p))


def marcinkiewicz_norm(x, p: float) -> float:
    """||x||_{m_p} = sup_k k^{1/p - 1} sum_{j<=k} x*_j.

    Normalised by k^{1/p'} so that (1/p')||x||_{m_p} <= ||x||_{p,inf} <= ||x||_{m_p}.
    """
    if not p > 1:
        raise BadParams(f"Marcinkiewicz exponent p={p} must be > 1")
    xs = rearrange(x)
    if xs.size == 0:
        return 0.0
    k = np.arange(1, xs.size + 1, dtype=float)
    return float(np.max(np.cumsum(xs) / k ** (1.0 - 1.0 / p)))


def lorentz1_dual_norm(x, p: float) -> float:
    """Kothe dual norm of l_{p,1}: sup_k k^{-1/p} sum_{j<=k} x*_j.

    Equals ``marcinkiewicz_norm(x, p')``; it is the exact constant in
    |sum a_i b_i| <= ||a||_{p,1} * lorentz1_dual_norm(b, p).
    """
    if not p >= 1:
        raise BadParams(f"p={p} < 1")
    xs = rearrange(x)
    if xs.size == 0:
        return 0.0
    k = np.arange(1, xs.size + 1, dtype=float)
    return float(np.max(np.cumsum(xs) / k ** (1.0 / p)))


def fundamental_function(params: LorentzParams, N: int) -> float:
    """Norm of an N-atom indicator."""
    if N < 1:
        raise BadParams(f"N={N} must be >= 1")
    return params.norm(np.ones(int(N)))


def power_sum(N: int, alpha: float) -> np.ndarray:
    """Partial sums sum_{k<=M} k^{-alpha} for M = 1..N."""
    k = np.arange(1, int(N) + 1, dtype=float)
    return np.cumsum(k**-alpha)


def power_sum_bound(N, alpha: float):
    """The integral comparison bound N^{1-alpha}/(1-alpha) for alpha in (0,1)."""
    if not 0 < alpha < 1:
        raise BadParams(f"alpha={alpha} must lie in (0, 1)")
    return np.asarray(N, dtype=float) ** (1.0 - alpha) / (1.0 - alpha)


def quasi_triangle_constant(p, q, rng, trials=1000, size=16, scheme=TELESCOPING) -> float:
    """Largest observed ||x+y|| / (||x|| + ||y||) over random nonnegative pairs.

    For q <= p this never exceeds 1; for q > p it measures the quasi-norm
    constant on the sample (reported, not a bound).
    """
    worst = 0.0
    for _ in range(trials):
        x = rng.exponential(size=size) * (rng.random(size) < 0.6)
        y = rng.exponential(size=size) * (rng.random(size) < 0.6)
        den = lorentz_norm(x, p, q, scheme) + lorentz_norm(y, p, q, scheme)
        if den > 0:
            worst = max(worst, lorentz_norm(x + y, p, q, scheme) / den)
    return worst


class Weight:
    """Positive weight (w_n) on the positive integers.

    Built either from a generator ``f(n) -> float`` or from an explicit
    mapping/sequence (sequences are read as w_1, w_2, ...).
    """

    def __init__(self, values: Callable[[int], float] | Mapping[int, float] | list, name: str = ""):
        self.name = name
        if callable(values):
            self._fn = values
            self._table = None
        elif isinstance(values, Mapping):
            self._fn = None
            self._table = {int(k): float(v) for k, v in values.items()}
        else:
            self._fn = None
            self._table = {i + 1: float(v) for i, v in enumerate(values)}

    def __call__(self, n: int) -> float:
        try:
            w = self._fn(n) if self._fn is not None else self._table[int(n)]
        except (KeyError, ValueError) as exc:
            raise WeightDomainError(f"weight {self.name or ''} undefined at n={n}") from exc
        if not w > 0:
            raise WeightDomainError(f"weight {self.name or ''} is not positive at n={n}: {w}")
        return float(w)


def weighted_l1_norm(x, w: Weight) -> float:
    """sum_n |x_n| w_n. ``x`` is a mapping n -> x_n, or a sequence read as x_1, x_2, ..."""
    items = x.items() if isinstance(x, Mapping) else enumerate(np.asarray(x).ravel(), start=1)
    terms = [abs(v) * w(n) for n, v in items if v != 0]
    return math.fsum(terms)
