"""Statement-level checks of the Bohnenblust-Hille type inequalities.

Every verifier returns an InequalityReport for ``lhs <= constant * base``.
Checks whose base is a sup norm take a SupNormEstimate; the verdict is then
``holds`` only when the attained lower value already suffices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BadParams, EmptyInput, SymmetryViolation
from ..forms import PolynomialCoefficients, SupNormEstimate, polarization_factor, supnorm_form, symmetric_from_poly
from ..lorentz import lorentz_norm, weak_norm
from ..mixed import CoefficientTensor, block_max, block_norm, block_sum, is_symmetric
from ..multiindex import (
    FULL,
    NONDECREASING,
    IndexSetSpec,
    cardinalities,
    coordinate_extent,
    enumerate_indices,
)
from .constants import DEFAULT_CONSTANTS, SQRT2, BHConstantTable, chain_constant
from .report import InequalityReport, judge


def _vals(a) -> np.ndarray:
    return a.values if isinstance(a, CoefficientTensor) else np.asarray(a, dtype=complex)


def _desc(a, **extra) -> dict:
    v = _vals(a)
    return {"m": v.ndim, "n": v.shape[0], **extra}


def _weak(x, p):
    return float(np.abs(x).max(initial=0.0)) if p == math.inf else weak_norm(x, p)


def _lor(x, p, q=1.0):
    return float(np.abs(np.asarray(x)).sum()) if p == 1 and q == 1 else lorentz_norm(x, p, q)


def _sup_bracket(sup) -> tuple:
    if isinstance(sup, SupNormEstimate):
        return sup.lower, sup.upper
    return float(sup), float(sup)


# -- exact combinatorial inequalities ----------------------------------------------


def verify_lem1(a, S_set) -> InequalityReport:
    """sum_{i in S} |a_i| <= m E(S) ||a||_{m/(m-1),inf}."""
    vals = _vals(a)
    m = vals.ndim
    S = np.asarray(list(S_set) if not isinstance(S_set, np.ndarray) else S_set, dtype=np.int64)
    if S.size == 0:
        raise EmptyInput("lem1 needs a nonempty index set")
    S = S.reshape(-1, m)
    lhs = float(np.abs(vals[tuple((S - 1).T)]).sum())
    E = coordinate_extent(S)
    p = math.inf if m == 1 else m / (m - 1)
    base = E * _weak(vals, p)
    return judge("lem1", lhs, float(m), base, instance=_desc(a, size=len(S), extent=E), data=vals)


@dataclass
class Partition:
    """Disjoint cover S_1..S_m of M(m,n) as integer labels 0..m-1 per entry."""

    labels: np.ndarray  # shape (n,)*m, label k-1 for S_k
    rounds: list  # per round: chosen value l(k) per coordinate (1-based)

    def mask(self, k: int) -> np.ndarray:
        return self.labels == k - 1

    @property
    def m(self) -> int:
        return self.labels.ndim


def greedy_partition(a, q: float = 1.0) -> Partition:
    """Split M(m,n) into S_1..S_m with small l_inf[l_q] block norms.

    Runs on b = |a|^q. The remaining set is a product N_1 x ... x N_m. Each
    round picks, for every coordinate k, the remaining value l(k) of minimal
    slice mass of b over the current product set (ties: smallest value) and
    moves the slice {i_k = l(k)} into S_k (entries hit by several slices go to
    the smallest k). After n rounds everything is assigned.
    """
    if q < 1:
        raise BadParams(f"q={q} must be >= 1")
    vals = _vals(a)
    m, n = vals.ndim, vals.shape[0]
    labels = np.full(vals.shape, -1, dtype=np.int64)
    if m == 1:
        labels[:] = 0
        return Partition(labels, [])
    b = np.abs(vals) ** q
    remaining = [list(range(n)) for _ in range(m)]
    rounds = []
    for _ in range(n):
        sub = b[np.ix_(*remaining)]
        chosen = []
        for k in range(m):
            axes = tuple(c for c in range(m) if c != k)
            mass = sub.sum(axis=axes)
            chosen.append(remaining[k][int(np.argmin(mass))])
        for k in reversed(range(m)):
            # later writes win, so walking k downwards leaves overlaps with the smallest k
            idx = [np.asarray(r) for r in remaining]
            idx[k] = np.asarray([chosen[k]])
            labels[np.ix_(*idx)] = k
        for k in range(m):
            remaining[k].remove(chosen[k])
        rounds.append([c + 1 for c in chosen])
    return Partition(labels, rounds)


def is_partition(part: Partition) -> bool:
    return bool(np.all((part.labels >= 0) & (part.labels < max(part.m, 1))))


def verify_lem2(a, q: float = 1.0, part: Partition | None = None) -> InequalityReport:
    """max_k ||a^{S_k}||_{l_inf({k})[l_q]} <= m^{1/q} ||a||_{qm/(m-1),inf}."""
    vals = _vals(a)
    m = vals.ndim
    part = part or greedy_partition(vals, q)
    covered = is_partition(part)
    if m == 1:
        lhs = float(np.abs(vals).max(initial=0.0))
        return judge("lem2", lhs, 1.0, lhs, instance=_desc(a, q=q, partition=covered), data=vals)
    lhs = max(block_norm(np.where(part.mask(k), vals, 0), (k,), math.inf, q) for k in range(1, m + 1))
    base = weak_norm(vals, q * m / (m - 1))
    return judge("lem2", lhs, m ** (1.0 / q), base, instance=_desc(a, q=q, partition=covered), data=vals)


def verify_cor2(a, q: float) -> InequalityReport:
    """||a||_{qm/((q-1)m+1),1} <= m^{1/q} sum_k ||a||_{l_1({k})[l_q']}."""
    if not q > 1:
        raise BadParams(f"q={q} must be > 1")
    vals = _vals(a)
    m = vals.ndim
    qc = math.inf if q == math.inf else q / (q - 1)
    lhs = _lor(vals, q * m / ((q - 1) * m + 1))
    base = math.fsum(block_norm(vals, (k,), 1, qc) for k in range(1, m + 1))
    return judge("cor2", lhs, m ** (1.0 / q), base, instance=_desc(a, q=q), data=vals)


def verify_fournier(a, k: int) -> InequalityReport:
    """||a||_{m/k,1} <= binom(m,k)^{-1} sum_{|S|=k} ||a||_{l_1(S)[l_inf]}."""
    vals = _vals(a)
    m = vals.ndim
    lhs = _lor(vals, m / k)
    base = block_sum(vals, k, 1, math.inf)
    return judge("fournier", lhs, 1.0 / math.comb(m, k), base, instance=_desc(a, k=k), data=vals)


def verify_uno(a, k: int) -> InequalityReport:
    """||a||_{2m/(m+k),1} <= binom(m,k)^{1/2} sum_{|S|=k} ||a||_{l_1(S)[l_2]}."""
    vals = _vals(a)
    m = vals.ndim
    lhs = _lor(vals, 2 * m / (m + k))
    base = block_sum(vals, k, 1, 2)
    return judge("uno", lhs, math.sqrt(math.comb(m, k)), base, instance=_desc(a, k=k), data=vals)


def verify_embedding_lorentz_blocks(a, k: int) -> InequalityReport:
    """||a||_{2m/(m+1),2k/(k+1)} <= 2 binom(m,k)^{3/2} sum_{|S|=k} ||a||_{l_{2k/(k+1)}(S)[l_2]}."""
    vals = _vals(a)
    m = vals.ndim
    if not 1 <= k <= m:
        raise BadParams(f"k={k} outside 1..{m}")
    r = 2 * k / (k + 1)
    lhs = _lor(vals, 2 * m / (m + 1), r)
    base = block_sum(vals, k, r, 2)
    return judge("emb-blocks", lhs, 2 * math.comb(m, k) ** 1.5, base, instance=_desc(a, k=k), data=vals)


def verify_lorentz_blocks(a, t: float, q: float = 2.0, constants: BHConstantTable = DEFAULT_CONSTANTS) -> InequalityReport:
    """||a||_{mqt/(mq+t-q),t} <= C_q m ||a||_{(m,n,m-1,t,q)}; C_q from configuration (fit mode)."""
    vals = _vals(a)
    m = vals.ndim
    if not 1 <= t < q:
        raise BadParams(f"need 1 <= t < q, got t={t}, q={q}")
    if m < 2:
        raise BadParams("needs m >= 2")
    lhs = _lor(vals, m * q * t / (m * q + t - q), t)
    base = m * block_sum(vals, m - 1, t, q)
    return judge("lorentz-blocks", lhs, constants.C(q), base, instance=_desc(a, t=t, q=q), data=vals)


def verify_lemma_x(a, q: float = 2.0, constants: BHConstantTable = DEFAULT_CONSTANTS) -> InequalityReport:
    """||a||_{mq/(m+q-1),1} <= C_q m ||a||_{(m,n,1,1,q)}; C_q from configuration (fit mode)."""
    vals = _vals(a)
    m = vals.ndim
    if m < 2:
        raise BadParams("needs m >= 2")
    lhs = _lor(vals, m * q / (m + q - 1))
    base = m * block_sum(vals, 1, 1, q)
    return judge("lemma-x", lhs, constants.C(q), base, instance=_desc(a, q=q), data=vals)


# -- diagonal operator -----------------------------------------------------------------


def diagonal_apply(a) -> PolynomialCoefficients:
    """(card[j]^{(m+1)/(2m)} a_j)_{j in J(m,n)} for symmetric a."""
    vals = _vals(a)
    if not is_symmetric(vals):
        raise SymmetryViolation("the diagonal operator acts on symmetric tensors")
    m, n = vals.ndim, vals.shape[0]
    J = enumerate_indices(IndexSetSpec(m, n, NONDECREASING))
    card = cardinalities(J).astype(float)
    return PolynomialCoefficients(m, n, card ** ((m + 1) / (2 * m)) * vals[tuple((J - 1).T)])


def verify_destimate(a) -> tuple:
    """Endpoint bounds ||Da||_{l_1(J)} <= ||a||_{l_1(M)} and ||Da||_{l_2(J)} <= sqrt(m) ||a||_{l_2(M)}."""
    vals = _vals(a)
    m = vals.ndim
    d = diagonal_apply(vals).values
    r1 = judge("destimate-l1", float(np.abs(d).sum()), 1.0, float(np.abs(vals).sum()), instance=_desc(a), data=vals)
    r2 = judge("destimate-l2", float(np.linalg.norm(d)), math.sqrt(m), float(np.linalg.norm(vals)),
               instance=_desc(a), data=vals)
    return r1, r2


def verify_diagonal(a, constants: BHConstantTable = DEFAULT_CONSTANTS) -> InequalityReport:
    """||Da||_{2m/(m+1),1 on J} <= L m ||a||_{2m/(m+1),1 on M}; L from configuration (fit mode)."""
    vals = _vals(a)
    m = vals.ndim
    p = 2 * m / (m + 1)
    lhs = _lor(diagonal_apply(vals).values, p)
    return judge("diagonal", lhs, constants.L, m * _lor(vals, p), instance=_desc(a), data=vals)


# -- sup-norm inequalities ------------------------------------------------------------


def verify_mixed_bh(a, k: int, sup) -> InequalityReport:
    """sum_j (sum_i |a_{i (+) j}|^2)^{1/2} <= sqrt2^{m-1} ||a||_inf, j running over coordinate k."""
    vals = _vals(a)
    m = vals.ndim
    lo, hi = _sup_bracket(sup)
    lhs = block_norm(vals, (k,), 1, 2)
    return judge("mixed-bh", lhs, SQRT2 ** (m - 1), lo, hi, _desc(a, k=k), vals)


def verify_bf(a, sup) -> InequalityReport:
    """||a||_{2m/(m+1),1} <= sqrt(m) sqrt2^{m-1} ||a||_inf."""
    vals = _vals(a)
    m = vals.ndim
    lo, hi = _sup_bracket(sup)
    lhs = _lor(vals, 2 * m / (m + 1))
    return judge("bf", lhs, math.sqrt(m) * SQRT2 ** (m - 1), lo, hi, _desc(a), vals)


def verify_bps_blocks(a, k: int, sup, constants: BHConstantTable = DEFAULT_CONSTANTS) -> InequalityReport:
    """max_{|S|=k} ||a||_{l_{2k/(k+1)}(S)[l_2]} <= A^{m-k} BH(k) ||a||_inf.

    The block norms are combined by a maximum; the sum over S fails on a
    single atom (it picks up binom(m,k) equal terms). The sum is recorded in
    the instance for reference.
    """
    vals = _vals(a)
    m = vals.ndim
    if not 1 <= k < m:
        raise BadParams(f"need 1 <= k < m, got k={k}, m={m}")
    r = 2 * k / (k + 1)
    lo, hi = _sup_bracket(sup)
    lhs = block_max(vals, k, r, 2)
    const = constants.A(r) ** (m - k) * constants.bh(k)
    return judge("bps-blocks", lhs, const, lo, hi, _desc(a, k=k, block_sum=block_sum(vals, k, r, 2)), vals)


def verify_main1(a, sup, constants: BHConstantTable = DEFAULT_CONSTANTS) -> InequalityReport:
    """||a||_{2m/(m+1),2(m-1)/m} <= C_2 m sqrt2 kappa (m-1)^{(1-gamma)/2} ||a||_inf (fit mode)."""
    vals = _vals(a)
    m = vals.ndim
    if m < 2:
        raise BadParams("needs m >= 2")
    lo, hi = _sup_bracket(sup)
    lhs = _lor(vals, 2 * m / (m + 1), 2 * (m - 1) / m)
    const = constants.C2 * m * SQRT2 * constants.kappa * (m - 1) ** ((1 - constants.euler_gamma) / 2)
    return judge("main1", lhs, const, lo, hi, _desc(a), vals)


def verify_main2(a, k: int, sup, constants: BHConstantTable = DEFAULT_CONSTANTS) -> InequalityReport:
    """||a||_{2m/(m+1),2k/(k+1)} <= 2 binom(m,k)^{3/2} A^{m-k} BH(k) ||a||_inf."""
    vals = _vals(a)
    m = vals.ndim
    if not 1 <= k <= m:
        raise BadParams(f"k={k} outside 1..{m}")
    r = 2 * k / (k + 1)
    lo, hi = _sup_bracket(sup)
    lhs = _lor(vals, 2 * m / (m + 1), r)
    const = 2 * math.comb(m, k) ** 1.5 * constants.A(r) ** (m - k) * constants.bh(k)
    return judge("main2", lhs, const, lo, hi, _desc(a, k=k), vals)


def verify_polarization(a, poly_sup: SupNormEstimate, form_sup: SupNormEstimate | None = None,
                        starts: int = 32, seed: int = 0) -> InequalityReport:
    """||a||_inf <= (m^m/m!) ||P||_inf for the symmetric form a of P.

    The left side is the ascent value (a true lower bound), the right side the
    certified upper bound of ||P||_inf, so a failure here is a genuine violation.
    """
    vals = _vals(a)
    m = vals.ndim
    if poly_sup.upper is None:
        raise BadParams("polarization check needs a certified upper bound for ||P||_inf")
    form_sup = form_sup or supnorm_form(vals, starts=starts, seed=seed)
    return judge("polarization", form_sup.lower, polarization_factor(m), poly_sup.upper, poly_sup.upper,
                 _desc(a), vals)


def _poly_lhs(c: PolynomialCoefficients) -> float:
    m = c.m
    return _lor(c.values, 2 * m / (m + 1))


def verify_polycase(c: PolynomialCoefficients, sup: SupNormEstimate) -> InequalityReport:
    """||c||_{2m/(m+1),1} <= m^m sqrt(m) sqrt2^{m-1} ||P||_inf."""
    m = c.m
    lo, hi = _sup_bracket(sup)
    const = m**m * math.sqrt(m) * SQRT2 ** (m - 1)
    return judge("polycase", _poly_lhs(c), const, lo, hi, {"m": m, "n": c.n}, c.values)


def verify_poly_bh(c: PolynomialCoefficients, sup: SupNormEstimate,
                   constants: BHConstantTable = DEFAULT_CONSTANTS) -> InequalityReport:
    """||c||_{2m/(m+1),1} <= C_chain(m) ||P||_inf."""
    lo, hi = _sup_bracket(sup)
    return judge("poly-bh", _poly_lhs(c), chain_constant(c.m, constants), lo, hi, {"m": c.m, "n": c.n}, c.values)


def symmetric_block_lhs(a) -> float:
    """sum_l (sum_{j in M(m-1,n)} card[j] |a_{(l) (+) j}|^2)^{1/2} for symmetric a."""
    vals = _vals(a)
    m, n = vals.ndim, vals.shape[0]
    if m == 1:
        return float(np.abs(vals).sum())
    rest = enumerate_indices(IndexSetSpec(m - 1, n, FULL))
    card = cardinalities(np.sort(rest, axis=1)).astype(float).reshape((n,) * (m - 1))
    inner = np.sqrt(np.sum(card[None] * np.abs(vals) ** 2, axis=tuple(range(1, m))))
    return float(inner.sum())


def verify_symmetric_blocks(c: PolynomialCoefficients, sup: SupNormEstimate,
                            constants: BHConstantTable = DEFAULT_CONSTANTS) -> InequalityReport:
    """k = 1 case: sum_l (sum_j card[j] |a_{l (+) j}|^2)^{1/2}
    <= S_1^{m-1} (m-1)! m^m / ((m-1)^{m-1} m!) BH(1) ||P||_inf."""
    m = c.m
    a = symmetric_from_poly(c)
    lhs = symmetric_block_lhs(a)
    const = constants.S(1) ** (m - 1) * math.factorial(m - 1) * m**m / ((m - 1) ** (m - 1) * math.factorial(m))
    lo, hi = _sup_bracket(sup)
    return judge("sym-blocks", lhs, const * constants.bh(1), lo, hi, {"m": m, "n": c.n}, c.values)


# -- Khinchine-Steinhaus ---------------------------------------------------------------


@dataclass
class KhinchineEstimate:
    ratio: float
    std_error: float
    samples: int

    @property
    def bound(self) -> float:
        return SQRT2 + 3 * self.std_error

    @property
    def holds(self) -> bool:
        return self.ratio <= self.bound


def khinchine_mc(alpha, samples: int = 10**5, rng=None) -> KhinchineEstimate:
    """Monte Carlo estimate of ||alpha||_2 / E|sum alpha_k z_k| over the torus.

    The standard error of the ratio uses the delta method on the sample mean.
    """
    alpha = np.asarray(alpha, dtype=complex)
    rng = rng if rng is not None else np.random.default_rng(0)
    z = np.exp(2j * np.pi * rng.random((samples, alpha.size)))
    vals = np.abs(z @ alpha)
    mean = float(vals.mean())
    se_mean = float(vals.std(ddof=1)) / math.sqrt(samples)
    l2 = float(np.linalg.norm(alpha))
    return KhinchineEstimate(l2 / mean, l2 * se_mean / mean**2, samples)
