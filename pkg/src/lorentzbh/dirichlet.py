"""Bohr lift between m-homogeneous polynomials and Dirichlet series, the
logarithmic weight omega_n, and the two non-embedding growth tables."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bhlab.constants import DEFAULT_CONSTANTS, BHConstantTable, chain_constant
from .bhlab.report import InequalityReport, judge
from .errors import BadParams, DomainError
from .forms import PolynomialCoefficients, SupNormEstimate
from .lorentz import Weight, lorentz_norm, weighted_l1_norm

SIEVE_BOUND = 10**6


@lru_cache(maxsize=8)
def prime_table(bound: int = SIEVE_BOUND) -> np.ndarray:
    """All primes <= bound (sieve of Eratosthenes)."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(bound + 1, dtype=bool)
    is_p[:2] = False
    for k in range(2, math.isqrt(bound) + 1):
        if is_p[k]:
            is_p[k * k :: k] = False
    return np.flatnonzero(is_p).astype(np.int64)


@lru_cache(maxsize=8)
def _prime_list(bound: int) -> list:
    return prime_table(bound).tolist()


def nth_prime(j: int, bound: int = SIEVE_BOUND) -> int:
    """p_j, 1-based (p_1 = 2)."""
    table = prime_table(bound)
    if not 1 <= j <= table.size:
        raise DomainError(f"prime index {j} outside the sieve table (size {table.size})")
    return int(table[j - 1])


def lift_index(j, bound: int = SIEVE_BOUND) -> int:
    """n = p_{j_1} ... p_{j_m} for a (nondecreasing) variable index j."""
    return math.prod(nth_prime(int(c), bound) for c in j)


def unlift_index(n: int, m: int | None = None, bound: int = SIEVE_BOUND) -> tuple:
    """Nondecreasing variable index j with prod p_{j_k} = n, by trial division."""
    n = int(n)
    if n < 1:
        raise DomainError(f"n={n} must be positive")
    table = prime_table(bound)
    out = []
    rest = n
    for pos, p in enumerate(_prime_list(bound)):
        if p * p > rest:
            break
        while rest % p == 0:
            out.append(pos + 1)
            rest //= p
    if rest > 1:
        pos = int(np.searchsorted(table, rest))
        if pos >= table.size or table[pos] != rest:
            raise DomainError(f"{n} has a prime factor beyond the sieve bound {bound}")
        out.append(pos + 1)
    if m is not None and len(out) != m:
        raise DomainError(f"{n} has {len(out)} prime factors, expected {m}")
    return tuple(out)


def unlift_many(ns, m: int, bound: int = SIEVE_BOUND) -> np.ndarray:
    """Vectorised ``unlift_index``: (len(ns), m) array of prime positions.

    Trial division by every tabled prime up to sqrt(max n), run on all n at
    once; entries with the wrong number of prime factors raise DomainError.
    """
    ns = np.asarray(ns, dtype=np.int64).ravel()
    table = prime_table(bound)
    rest = ns.copy()
    out = np.zeros((ns.size, m + 1), dtype=np.int64)
    count = np.zeros(ns.size, dtype=np.int64)
    rows = np.arange(ns.size)
    limit = math.isqrt(int(ns.max(initial=1)))
    for pos, p in enumerate(table[table <= limit].tolist()):
        hit = rest % p == 0
        while hit.any():
            sel = rows[hit]
            out[sel, np.minimum(count[sel], m)] = pos + 1
            count[sel] += 1
            rest[sel] //= p
            hit = rest % p == 0
    big = rest > 1
    pos = np.searchsorted(table, rest[big])
    if np.any(pos >= table.size) or np.any(table[np.minimum(pos, table.size - 1)] != rest[big]):
        raise DomainError(f"a prime factor exceeds the sieve bound {bound}")
    sel = rows[big]
    out[sel, np.minimum(count[sel], m)] = pos + 1
    count[sel] += 1
    if np.any(count != m):
        bad = ns[count != m][0]
        raise DomainError(f"{bad} does not have exactly {m} prime factors")
    return out[:, :m]


def lift_many(J, bound: int = SIEVE_BOUND) -> np.ndarray:
    """Vectorised ``lift_index`` over rows of a (count, m) index array."""
    table = prime_table(bound)
    J = np.asarray(J, dtype=np.int64)
    if J.size and (J.min() < 1 or J.max() > table.size):
        raise DomainError("prime index outside the sieve table")
    return np.prod(table[J - 1], axis=1)


def omega_table(N: int) -> np.ndarray:
    """Omega(n) for n = 0..N (prime factors with multiplicity), by sieving prime powers."""
    om = np.zeros(N + 1, dtype=np.int64)
    for p in prime_table(N).tolist():
        pk = p
        while pk <= N:
            om[pk::pk] += 1
            pk *= p
    return om


def omega_count(n: int, bound: int = SIEVE_BOUND) -> int:
    """Number of prime factors of n with multiplicity."""
    return len(unlift_index(n, None, bound))


@dataclass(frozen=True)
class PrimePowerIndex:
    n: int
    alpha: tuple

    def __post_init__(self):
        n = math.prod(nth_prime(k + 1) ** a for k, a in enumerate(self.alpha))
        if n != self.n:
            raise BadParams(f"{self.n} != prod p_k^alpha_k = {n}")

    @property
    def m(self) -> int:
        return sum(self.alpha)

    @classmethod
    def from_n(cls, n: int) -> "PrimePowerIndex":
        j = unlift_index(n)
        alpha = [0] * (max(j) if j else 0)
        for c in j:
            alpha[c - 1] += 1
        return cls(int(n), tuple(alpha))


@dataclass
class DirichletCoefficients:
    m: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {int(n): complex(v) for n, v in self.entries.items()}
        for n in self.entries:
            if omega_count(n) != self.m:
                raise DomainError(f"n={n} is not {self.m}-homogeneous")

    def values(self) -> np.ndarray:
        return np.array([self.entries[n] for n in sorted(self.entries)], dtype=complex)

    def to_json(self) -> str:
        rows = [{"n": n, "re": v.real, "im": v.imag} for n, v in sorted(self.entries.items()) if v != 0]
        return json.dumps({"m": self.m, "entries": rows}, sort_keys=True)

    @classmethod
    def from_json(cls, text) -> "DirichletCoefficients":
        doc = json.loads(text) if isinstance(text, str) else text
        try:
            return cls(int(doc["m"]), {int(e["n"]): complex(e.get("re", 0.0), e.get("im", 0.0)) for e in doc["entries"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise BadParams(f"malformed Dirichlet JSON: {exc}") from exc


def bohr_lift(c: PolynomialCoefficients) -> DirichletCoefficients:
    """a_n = c_j with n = p_{j_1} ... p_{j_m}; zero coefficients are dropped."""
    entries = {lift_index(j): v for j, v in zip(c.indices, c.values) if v != 0}
    return DirichletCoefficients(c.m, entries)


def bohr_unlift(D: DirichletCoefficients, n_vars: int | None = None) -> PolynomialCoefficients:
    idx = {n: unlift_index(n, D.m) for n in D.entries}
    if n_vars is None:
        n_vars = max((max(j) for j in idx.values()), default=1)
    return PolynomialCoefficients.from_entries(D.m, n_vars, {idx[n]: v for n, v in D.entries.items()})


def bcq_weight(n, m: int):
    """omega_n = (log n)^{(m-1)/2} / n^{(m-1)/(2m)}; vectorised over n."""
    n_arr = np.asarray(n, dtype=float)
    if np.any(n_arr < 2):
        raise DomainError("the weight needs n >= 2")
    if m < 1:
        raise BadParams(f"m={m} must be >= 1")
    out = np.log(n_arr) ** ((m - 1) / 2) / n_arr ** ((m - 1) / (2 * m))
    return float(out) if out.ndim == 0 else out


def dirichlet_lorentz_check(c: PolynomialCoefficients, sup: SupNormEstimate,
                    constants: BHConstantTable = DEFAULT_CONSTANTS) -> InequalityReport:
    """||(a_n*)||_{2m/(m+1),1} of the lifted series against the polynomial chain constant."""
    m = c.m
    D = bohr_lift(c)
    lhs = lorentz_norm(D.values(), 2 * m / (m + 1), 1) if D.entries else 0.0
    return judge("dirichlet-lorentz", lhs, chain_constant(m, constants), sup.lower, sup.upper,
                 {"m": m, "n": c.n, "support": len(D.entries)}, c.values)


# name required by the public interface
theorem58_check = dirichlet_lorentz_check


@dataclass
class GrowthTables:
    m: int
    atoms: list  # rows: n, value, value_alt
    sums: list  # rows: N, weight_sum, lorentz, ratio
    threshold: float

    @property
    def atoms_increasing(self) -> bool:
        v = [r["value"] for r in self.atoms if r["n"] > self.threshold]
        return all(b > a for a, b in zip(v, v[1:]))

    @property
    def atoms_growth(self) -> float:
        v = [r["value"] for r in self.atoms if r["n"] > self.threshold]
        return v[-1] / v[0]

    @property
    def sums_increasing(self) -> bool:
        v = [r["ratio"] for r in self.sums]
        return all(b > a for a, b in zip(v, v[1:]))

    @property
    def sums_growth(self) -> float:
        return self.sums[-1]["ratio"] / self.sums[0]["ratio"]


def non_embedding_witnesses(m: int, N_max: int = 10**8, N_sum: int = 10**4, N_min: int = 10**2,
                            points: int = 41) -> GrowthTables:
    """Growth of the two quantities that rule out either inclusion between
    l_1(omega) and l_{2m/(m+1),1}.

    Table 1: ||e_n / omega_n||_{2m/(m+1),1} = n^{(m-1)/(2m)} / (log n)^{(m-1)/2}
    at log-spaced n in [2, N_max]; it increases for log n > m. ``value_alt``
    uses the log exponent (m-1)/m instead.
    Table 2: sum_{n<=N} omega_n against ||sum_{n<=N} e_n||_{2m/(m+1),1} = N^{(m-1)/(2m)}
    at log-spaced N in [N_min, N_sum].
    """
    if m < 2:
        raise BadParams("non-embedding witnesses need m >= 2")
    a = (m - 1) / (2 * m)
    ns = np.unique(np.round(np.logspace(math.log10(2), math.log10(N_max), points)).astype(np.int64))
    atoms = []
    for n in ns:
        w = bcq_weight(int(n), m)
        atoms.append({"n": int(n), "value": lorentz_norm([1.0 / w], 2 * m / (m + 1), 1),
                      "value_alt": float(n) ** a / math.log(n) ** ((m - 1) / m)})
    Ns = np.unique(np.round(np.logspace(math.log10(N_min), math.log10(N_sum), points)).astype(np.int64))
    w = np.concatenate([[0.0], bcq_weight(np.arange(2, N_sum + 1), m)])
    csum = np.cumsum(w)
    sums = []
    for N in Ns:
        lor = float(N) ** a
        sums.append({"N": int(N), "weight_sum": float(csum[N - 1]), "lorentz": lor, "ratio": float(csum[N - 1]) / lor})
    return GrowthTables(m, atoms, sums, math.exp(m))


@dataclass
class CorollaryReport:
    weighted_l1: float
    lorentz: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.weighted_l1) and math.isfinite(self.lorentz)


def corollary_membership(c: PolynomialCoefficients) -> CorollaryReport:
    """||a||_{l_1(omega)} and ||a||_{2m/(m+1),1} of the lifted coefficient sequence."""
    D = bohr_lift(c)
    m = c.m
    if not D.entries:
        return CorollaryReport(0.0, 0.0)
    if m == 1:
        w = Weight(lambda n: 1.0, "omega")
    else:
        w = Weight(lambda n: bcq_weight(n, m), "omega")
    return CorollaryReport(weighted_l1_norm(D.entries, w), lorentz_norm(D.values(), 2 * m / (m + 1), 1))


def decreasing_weight_comparison(x, m: int) -> tuple:
    """(sum |x_n| n^{-(m-1)/(2m)}, sum x*_n n^{-(m-1)/(2m)}) for x read as x_1, x_2, ..."""
    a = np.abs(np.asarray(x)).ravel()
    w = np.arange(1, a.size + 1, dtype=float) ** (-(m - 1) / (2 * m))
    return float(np.sum(a * w)), float(np.sum(np.sort(a)[::-1] * w))
