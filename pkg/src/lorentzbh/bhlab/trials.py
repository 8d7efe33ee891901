"""Seeded random and certified instances, and the per-lemma trial runner."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .._rng import make_rng
from ..errors import BadParams
from ..forms import (
    PolynomialCoefficients,
    SupNormEstimate,
    monomial_tensor,
    poly_from_symmetric,
    rank_one,
    supnorm_form,
    supnorm_poly,
    symmetric_from_poly,
)
from ..lowerbounds import certified_fourier
from ..mixed import CoefficientTensor, symmetrize
from ..multiindex import FULL, NONDECREASING, IndexSetSpec, enumerate_indices
from . import verifiers as V
from .constants import DEFAULT_CONSTANTS, BHConstantTable
from .report import HOLDS, INCONCLUSIVE, VIOLATED, InequalityReport, fitted_constant, judge

TRIAL_STARTS = 8


def threads() -> int:
    try:
        return max(1, int(os.environ.get("BHLAB_THREADS", "1")))
    except ValueError:
        return 1


# -- instance generators ------------------------------------------------------------


def random_tensor(rng, m: int, n: int, density: float = 0.7) -> CoefficientTensor:
    shape = (n,) * m
    vals = (rng.normal(size=shape) + 1j * rng.normal(size=shape)) * (rng.random(shape) < density)
    return CoefficientTensor(vals, label="random")


def random_symmetric(rng, m: int, n: int) -> CoefficientTensor:
    a = random_tensor(rng, m, n)
    return CoefficientTensor(symmetrize(a.values), symmetric=True, label="random-symmetric")


def random_polynomial(rng, m: int, n: int, density: float = 0.8) -> PolynomialCoefficients:
    size = IndexSetSpec(m, n, NONDECREASING).size
    vals = (rng.normal(size=size) + 1j * rng.normal(size=size)) * (rng.random(size) < density)
    return PolynomialCoefficients(m, n, vals)


def certified_tensor(rng, m: int, n: int, family: str | None = None, seed: int = 0) -> tuple:
    """A tensor with a sup-norm bracket: rank-one and monomial are exact; the
    Fourier tensor carries [ascent value, N^{(m+1)/2}]."""
    family = family or ("rank-one", "monomial", "fourier")[int(rng.integers(3))]
    if family == "rank-one":
        vecs = [rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(m)]
        return (*rank_one(*vecs), family)
    if family == "monomial":
        index = tuple(int(v) for v in rng.integers(1, n + 1, size=m))
        return (*monomial_tensor(m, n, index, np.exp(2j * np.pi * rng.random())), family)
    if family == "fourier":
        return (*certified_fourier(max(n, 2), m, starts=TRIAL_STARTS, seed=seed), family)
    raise BadParams(f"unknown certified family {family!r}")


def certified_polynomial(rng, m: int, n: int, family: str | None = None, seed: int = 0) -> tuple:
    """Polynomial with a certified sup norm: exact monomials or grid-certified random (n <= 3)."""
    family = family or ("random", "random", "monomial", "product")[int(rng.integers(4))]
    if family == "monomial":
        c = PolynomialCoefficients.from_entries(m, n, {(1,) * m: 1.0})
        return c, SupNormEstimate.exact(1.0, [np.ones(n, dtype=complex)]), family
    if family == "product" and n >= m:
        c = PolynomialCoefficients.from_entries(m, n, {tuple(range(1, m + 1)): 1.0})
        return c, SupNormEstimate.exact(1.0, [np.ones(n, dtype=complex)]), family
    if n > 3:
        raise BadParams("random certified polynomials need n <= 3 (grid oracle)")
    c = random_polynomial(rng, m, n)
    return c, supnorm_poly(c, starts=TRIAL_STARTS, seed=seed), "random"


def _heuristic(a, seed) -> SupNormEstimate:
    est = supnorm_form(a, starts=TRIAL_STARTS, seed=seed)
    return SupNormEstimate(est.lower, None, est.witness, est.method)


# -- registry ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    lemma_id: str
    statement: str
    kind: str  # exact | sup | fit | mc
    run: object


def _k(opts, rng, m, lo=1, hi=None):
    hi = m if hi is None else hi
    return int(opts["k"]) if opts.get("k") is not None else int(rng.integers(lo, hi + 1))


def _lem1(rng, m, n, opts, seed):
    a = random_tensor(rng, m, n)
    M = enumerate_indices(IndexSetSpec(m, n, FULL))
    size = int(rng.integers(1, M.shape[0] + 1))
    S = M[np.sort(rng.choice(M.shape[0], size=size, replace=False))]
    return [V.verify_lem1(a, S)]


def _sup_family(verify):
    def run(rng, m, n, opts, seed):
        if opts.get("heuristic"):
            a = random_tensor(rng, m, n)
            return [verify(a, _heuristic(a, seed), rng, opts)]
        a, sup, fam = certified_tensor(rng, m, n, opts.get("family"), seed)
        r = verify(a, sup, rng, opts)
        r.instance["family"] = fam
        return [r]

    return run


def _poly_family(verify):
    def run(rng, m, n, opts, seed):
        c, sup, fam = certified_polynomial(rng, m, n, opts.get("family"), seed)
        r = verify(c, sup, opts)
        r.instance["family"] = fam
        return [r]

    return run


def _polarization(rng, m, n, opts, seed):
    a = random_symmetric(rng, m, n)
    sup = supnorm_poly(poly_from_symmetric(a), starts=TRIAL_STARTS, seed=seed)
    return [V.verify_polarization(a, sup, starts=TRIAL_STARTS, seed=seed)]


def _khinchine(rng, m, n, opts, seed):
    alpha = rng.normal(size=n) + 1j * rng.normal(size=n)
    est = V.khinchine_mc(alpha, int(opts.get("samples", 10**5)), rng)
    return [judge("khinchine", est.ratio, 1.0, est.bound, instance={"n": n, "se": est.std_error}, data=alpha)]


CHECKS = {
    c.lemma_id: c
    for c in [
        Check("lem1", "sum_{i in S}|a_i| <= m E(S) ||a||_{m/(m-1),inf}", "exact", _lem1),
        Check("lem2", "greedy partition: max_k ||a^{S_k}||_{l_inf({k})[l_q]} <= m^{1/q} ||a||_{qm/(m-1),inf}", "exact",
              lambda rng, m, n, o, s: [V.verify_lem2(random_tensor(rng, m, n), float(o.get("q", 1.0)))]),
        Check("cor2", "||a||_{qm/((q-1)m+1),1} <= m^{1/q} sum_k ||a||_{l_1({k})[l_q']}", "exact",
              lambda rng, m, n, o, s: [V.verify_cor2(random_tensor(rng, m, n), float(o.get("q", 2.0)))]),
        Check("fournier", "||a||_{m/k,1} <= binom(m,k)^{-1} sum_S ||a||_{l_1(S)[l_inf]}", "exact",
              lambda rng, m, n, o, s: [V.verify_fournier(random_tensor(rng, m, n), _k(o, rng, m))]),
        Check("uno", "||a||_{2m/(m+k),1} <= binom(m,k)^{1/2} sum_S ||a||_{l_1(S)[l_2]}", "exact",
              lambda rng, m, n, o, s: [V.verify_uno(random_tensor(rng, m, n), _k(o, rng, m))]),
        Check("emb-blocks", "||a||_{2m/(m+1),2k/(k+1)} <= 2 binom(m,k)^{3/2} sum_S ||a||_{l_{2k/(k+1)}(S)[l_2]}",
              "exact", lambda rng, m, n, o, s: [V.verify_embedding_lorentz_blocks(random_tensor(rng, m, n), _k(o, rng, m))]),
        Check("destimate", "||Da||_{l_1(J)} <= ||a||_{l_1(M)}, ||Da||_{l_2(J)} <= sqrt(m)||a||_{l_2(M)}", "exact",
              lambda rng, m, n, o, s: list(V.verify_destimate(random_symmetric(rng, m, n)))),
        Check("lorentz-blocks", "||a||_{mqt/(mq+t-q),t} <= C_q m ||a||_{(m,n,m-1,t,q)}", "fit",
              lambda rng, m, n, o, s: [V.verify_lorentz_blocks(random_tensor(rng, m, n), float(o.get("t", 1.0)),
                                                               float(o.get("q", 2.0)), o["constants"])]),
        Check("lemma-x", "||a||_{mq/(m+q-1),1} <= C_q m ||a||_{(m,n,1,1,q)}", "fit",
              lambda rng, m, n, o, s: [V.verify_lemma_x(random_tensor(rng, m, n), float(o.get("q", 2.0)), o["constants"])]),
        Check("diagonal", "||Da||_{2m/(m+1),1} <= L m ||a||_{2m/(m+1),1}", "fit",
              lambda rng, m, n, o, s: [V.verify_diagonal(random_symmetric(rng, m, n), o["constants"])]),
        Check("mixed-bh", "sum_j (sum_i |a_{i+j}|^2)^{1/2} <= sqrt2^{m-1} ||a||_inf", "sup",
              _sup_family(lambda a, sup, rng, o: V.verify_mixed_bh(a, _k(o, rng, a.values.ndim), sup))),
        Check("bf", "||a||_{2m/(m+1),1} <= sqrt(m) sqrt2^{m-1} ||a||_inf", "sup",
              _sup_family(lambda a, sup, rng, o: V.verify_bf(a, sup))),
        Check("bps-blocks", "max_S ||a||_{l_{2k/(k+1)}(S)[l_2]} <= A^{m-k} BH(k) ||a||_inf", "sup",
              _sup_family(lambda a, sup, rng, o: V.verify_bps_blocks(a, int(o.get("k") or 1), sup, o["constants"]))),
        Check("main1", "||a||_{2m/(m+1),2(m-1)/m} <= C_2 m sqrt2 kappa (m-1)^{(1-gamma)/2} ||a||_inf", "fit",
              _sup_family(lambda a, sup, rng, o: V.verify_main1(a, sup, o["constants"]))),
        Check("main2", "||a||_{2m/(m+1),2k/(k+1)} <= 2 binom(m,k)^{3/2} A^{m-k} BH(k) ||a||_inf", "sup",
              _sup_family(lambda a, sup, rng, o: V.verify_main2(a, int(o.get("k") or 1), sup, o["constants"]))),
        Check("polarization", "||a||_inf <= (m^m/m!) ||P||_inf", "sup", _polarization),
        Check("polycase", "||c||_{2m/(m+1),1} <= m^m sqrt(m) sqrt2^{m-1} ||P||_inf", "sup",
              _poly_family(lambda c, sup, o: V.verify_polycase(c, sup))),
        Check("sym-blocks", "sum_l (sum_j card[j]|a_{l+j}|^2)^{1/2} <= S_1^{m-1} (m-1)! m^m/((m-1)^{m-1} m!) ||P||_inf",
              "sup", _poly_family(lambda c, sup, o: V.verify_symmetric_blocks(c, sup, o["constants"]))),
        Check("poly-bh", "||c||_{2m/(m+1),1} <= C_chain(m) ||P||_inf", "sup",
              _poly_family(lambda c, sup, o: V.verify_poly_bh(c, sup, o["constants"]))),
        Check("khinchine", "||alpha||_2 <= sqrt2 E|sum alpha_k z_k| (Monte Carlo, 3 standard errors)", "mc", _khinchine),
    ]
}


def _dirichlet_check():
    # registered lazily: the dirichlet module imports this package
    from ..dirichlet import dirichlet_lorentz_check

    return Check("dirichlet-lorentz", "||(a_n*)||_{2m/(m+1),1} <= C_chain(m) ||P||_inf for the lifted series", "sup",
                 _poly_family(lambda c, sup, o: dirichlet_lorentz_check(c, sup, o["constants"])))


@dataclass
class TrialSummary:
    lemma_id: str
    reports: list = field(default_factory=list)

    def count(self, verdict: str) -> int:
        return sum(1 for r in self.reports if r.verdict == verdict)

    @property
    def holds(self) -> int:
        return self.count(HOLDS)

    @property
    def violated(self) -> int:
        return self.count(VIOLATED)

    @property
    def inconclusive(self) -> int:
        return self.count(INCONCLUSIVE)

    @property
    def fitted_constant(self) -> float:
        return fitted_constant(self.reports)

    def to_dict(self) -> dict:
        return {"lemma_id": self.lemma_id, "trials": len(self.reports), "holds": self.holds,
                "violated": self.violated, "inconclusive": self.inconclusive,
                "fitted_constant": self.fitted_constant}


def get_check(lemma_id: str) -> Check:
    if lemma_id == "dirichlet-lorentz":
        return _dirichlet_check()
    try:
        return CHECKS[lemma_id]
    except KeyError:
        raise BadParams(f"unknown lemma id {lemma_id!r}; known: {', '.join(sorted(all_ids()))}") from None


def all_ids() -> list:
    return sorted([*CHECKS, "dirichlet-lorentz"])


def run_trials(lemma_id: str, m: int, n: int, trials: int, seed: int = 0,
               constants: BHConstantTable = DEFAULT_CONSTANTS, **opts) -> TrialSummary:
    """Run ``trials`` seeded instances; trial t draws from stream (seed, t).

    Trials may run on a thread pool (BHLAB_THREADS); results are gathered in
    trial order, so output does not depend on scheduling.
    """
    if m < 1 or n < 1 or trials < 0:
        raise BadParams(f"bad trial parameters m={m}, n={n}, trials={trials}")
    check = get_check(lemma_id)
    opts = {**opts, "constants": constants}

    def one(t):
        rng = make_rng(seed, t)
        reports = check.run(rng, m, n, opts, seed * 1_000_003 + t)
        for r in reports:
            r.instance.setdefault("trial", t)
            r.instance.setdefault("seed", seed)
        return reports

    workers = threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(one, range(trials)))
    else:
        batches = [one(t) for t in range(trials)]
    return TrialSummary(lemma_id, [r for b in batches for r in b])
