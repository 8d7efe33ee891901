"""Coefficient tensors on M(m,n) and the mixed norms l_p(S)[l_q(S^)]."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, InstanceTooLarge, MalformedSubset, SymmetryViolation
from .multiindex import ENUMERATION_LIMIT, FULL, IndexSetSpec, complement, subsets


@dataclass
class CoefficientTensor:
    """Complex coefficients (a_i) indexed by M(m,n), stored as an ``(n,)*m`` array.

    Entry ``values[i_1-1, ..., i_m-1]`` is a_i; C-order flattening is the
    lexicographic order of M(m,n).
    """

    values: np.ndarray
    symmetric: bool = False
    label: str = field(default="", compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim == 0:
            raise BadParams("coefficient tensor needs m >= 1")
        n = self.values.shape[0]
        if any(s != n for s in self.values.shape):
            raise BadParams(f"tensor shape {self.values.shape} is not (n,)*m")
        if self.values.size > ENUMERATION_LIMIT:
            raise InstanceTooLarge(f"tensor with {self.values.size} entries exceeds the enumeration cap")
        if self.symmetric and not is_symmetric(self.values):
            raise SymmetryViolation("tensor flagged symmetric is not permutation invariant")

    @property
    def m(self) -> int:
        return self.values.ndim

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def spec(self) -> IndexSetSpec:
        return IndexSetSpec(self.m, self.n, FULL)

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    def __getitem__(self, index):
        return self.values[tuple(int(v) - 1 for v in index)]

    def restrict(self, mask) -> "CoefficientTensor":
        """a^S: keep entries where ``mask`` is true, zero elsewhere."""
        mask = np.asarray(mask, dtype=bool).reshape(self.values.shape)
        return CoefficientTensor(np.where(mask, self.values, 0), symmetric=False)

    def scaled(self, lam) -> "CoefficientTensor":
        return CoefficientTensor(lam * self.values, symmetric=self.symmetric, label=self.label)

    @classmethod
    def zeros(cls, m: int, n: int) -> "CoefficientTensor":
        return cls(np.zeros((n,) * m, dtype=complex))

    @classmethod
    def from_entries(cls, m: int, n: int, entries, symmetric: bool = False) -> "CoefficientTensor":
        """Build from ``{(i_1..i_m): value}`` with 1-based indices; missing entries are zero."""
        vals = np.zeros((n,) * m, dtype=complex)
        for index, v in dict(entries).items():
            if len(index) != m or any(not 1 <= c <= n for c in index):
                raise BadParams(f"index {index} outside M({m},{n})")
            vals[tuple(c - 1 for c in index)] = v
        return cls(vals, symmetric=symmetric)


def is_symmetric(values, rtol: float = 1e-12) -> bool:
    values = np.asarray(values)
    scale = max(np.abs(values).max(initial=0.0), 1e-300)
    for perm in itertools.permutations(range(values.ndim)):
        if np.abs(values - np.transpose(values, perm)).max(initial=0.0) > rtol * scale:
            return False
    return True


def symmetrize(values) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    perms = list(itertools.permutations(range(values.ndim)))
    out = np.zeros_like(values)
    for perm in perms:
        out += np.transpose(values, perm)
    return out / len(perms)


def _as_values(a):
    return a.values if isinstance(a, CoefficientTensor) else np.asarray(a, dtype=complex)


def _reduce(b: np.ndarray, r: float, axis) -> np.ndarray:
    # b >= 0; numpy's add.reduce over a contiguous axis is pairwise summation
    if r == math.inf:
        return b.max(axis=axis)
    if r == 1:
        return b.sum(axis=axis)
    scale = b.max(axis=axis, keepdims=True)
    scale = np.where(scale > 0, scale, 1.0)
    return np.squeeze(scale, axis=axis) * np.sum((b / scale) ** r, axis=axis) ** (1.0 / r)


def _check_mixed_exponent(r):
    if not (r >= 1 or r == math.inf):
        raise BadParams(f"mixed-norm exponent {r} must be >= 1 or inf")


def block_norm(a, S, p: float, q: float) -> float:
    """||a||_{l_p(S)[l_q(S^)]}: outer l_p over the coordinates in S of the inner
    l_q norms over the complementary coordinates. ``S`` holds 1-based coordinates."""
    _check_mixed_exponent(p)
    _check_mixed_exponent(q)
    vals = _as_values(a)
    m, n = vals.ndim, vals.shape[0]
    S = tuple(sorted(int(c) for c in S))
    Sh = complement(S, m)
    perm = [c - 1 for c in S] + [c - 1 for c in Sh]
    mat = np.abs(np.transpose(vals, perm)).reshape(n ** len(S), n ** len(Sh))
    inner = _reduce(mat, q, axis=1)
    return float(_reduce(inner, p, axis=0))


def aggregate_norm(a, k: int, p: float, q: float) -> float:
    """||a||_{(m,n,k,p,q)}: sum of block norms over all k-subsets S, 1 <= k < m."""
    vals = _as_values(a)
    m = vals.ndim
    if not 1 <= k < m:
        raise BadParams(f"aggregate norm needs 1 <= k < m, got k={k}, m={m}")
    return block_sum(vals, k, p, q)


def block_sum(a, k: int, p: float, q: float) -> float:
    """Sum of ``block_norm`` over P_k(m) in fixed order; allows k = m."""
    vals = _as_values(a)
    terms = [block_norm(vals, S, p, q) for S in subsets(vals.ndim, k)]
    return math.fsum(terms)


def block_max(a, k: int, p: float, q: float) -> float:
    vals = _as_values(a)
    return max(block_norm(vals, S, p, q) for S in subsets(vals.ndim, k))


def slice_masses(a, coordinate: int) -> np.ndarray:
    """sum_{i: i_k = l} |a_i| for l = 1..n (``coordinate`` is 1-based)."""
    vals = np.abs(_as_values(a))
    if not 1 <= coordinate <= vals.ndim:
        raise MalformedSubset(f"coordinate {coordinate} outside 1..{vals.ndim}")
    axes = tuple(c for c in range(vals.ndim) if c != coordinate - 1)
    return vals.sum(axis=axes) if axes else vals.copy()
