"""Index sets M(m,n) (all m-tuples over 1..n) and J(m,n) (nondecreasing
tuples), their permutation classes, coordinate subsets and index composition.

Index *values* are 1-based throughout the public API. Storage offsets are
0-based and lexicographic, which for the full set coincides with C-order
flattening of an ``(n,)*m`` array.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import comb, factorial, prod
from typing import Iterable, Sequence

import numpy as np

from .errors import BadParams, EmptyInput, InstanceTooLarge, MalformedSubset

ENUMERATION_LIMIT = 10**7

FULL = "full"
NONDECREASING = "nondecreasing"


@dataclass(frozen=True)
class IndexSetSpec:
    m: int
    n: int
    kind: str = FULL

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise BadParams(f"index set needs m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        if self.kind not in (FULL, NONDECREASING):
            raise BadParams(f"unknown index set kind {self.kind!r}")

    @property
    def size(self) -> int:
        if self.kind == FULL:
            return self.n**self.m
        return comb(self.n + self.m - 1, self.m)


@dataclass(frozen=True)
class IndexClass:
    representative: tuple
    cardinality: int


def enumerate_indices(spec: IndexSetSpec, limit: int = ENUMERATION_LIMIT) -> np.ndarray:
    """All indices of ``spec`` in lexicographic order, as an ``(size, m)`` int array."""
    if spec.size > limit:
        raise InstanceTooLarge(f"{spec.kind} index set with m={spec.m}, n={spec.n} has {spec.size} entries > {limit}")
    values = range(1, spec.n + 1)
    if spec.kind == FULL:
        it = itertools.product(values, repeat=spec.m)
    else:
        it = itertools.combinations_with_replacement(values, spec.m)
    out = np.fromiter(itertools.chain.from_iterable(it), dtype=np.int64, count=spec.size * spec.m)
    return out.reshape(spec.size, spec.m)


def cardinality(index: Sequence[int]) -> int:
    """Number of distinct permutations of ``index`` (the multinomial m!/prod mult!)."""
    counts = Counter(index)
    return factorial(len(index)) // prod(factorial(c) for c in counts.values())


def class_of(index: Sequence[int]) -> IndexClass:
    index = tuple(int(v) for v in index)
    return IndexClass(tuple(sorted(index)), cardinality(index))


def cardinalities(indices: np.ndarray) -> np.ndarray:
    """Vectorised ``cardinality`` over the rows of an index array."""
    indices = np.sort(np.asarray(indices), axis=1)
    m = indices.shape[1]
    out = np.full(indices.shape[0], factorial(m), dtype=np.int64)
    run = np.ones(indices.shape[0], dtype=np.int64)
    for c in range(1, m):
        same = indices[:, c] == indices[:, c - 1]
        run = np.where(same, run + 1, 1)
        # dividing by the running length accumulates prod(mult!) one factor at a time
        out //= run
    return out


def index_to_offset(index: Sequence[int], n: int) -> int:
    off = 0
    for v in index:
        off = off * n + (int(v) - 1)
    return off


def offset_to_index(offset: int, m: int, n: int) -> tuple:
    digits = []
    for _ in range(m):
        offset, r = divmod(offset, n)
        digits.append(r + 1)
    return tuple(reversed(digits))


def subsets(m: int, k: int) -> list:
    """P_k(m): all k-element subsets of {1..m} as sorted tuples, in a fixed lexicographic order."""
    if not 0 <= k <= m:
        raise BadParams(f"subset size k={k} outside [0, {m}]")
    return list(itertools.combinations(range(1, m + 1), k))


def complement(S: Iterable[int], m: int) -> tuple:
    S = _check_subset(S, m)
    return tuple(c for c in range(1, m + 1) if c not in S)


def _check_subset(S, m):
    S = tuple(sorted(int(c) for c in S))
    if len(set(S)) != len(S) or any(c < 1 or c > m for c in S):
        raise MalformedSubset(f"{S} is not a subset of {{1..{m}}}")
    return S


def compose(i: Sequence[int], j: Sequence[int], S: Iterable[int], m: int | None = None) -> tuple:
    """i (+) j: the m-index equal to ``i`` on the positions S and ``j`` on the rest.

    ``i`` lists its values in increasing order of the positions in S, ``j``
    likewise for the complement.
    """
    S = tuple(sorted(int(c) for c in S))
    if m is None:
        m = len(i) + len(j)
    S = _check_subset(S, m)
    if len(i) != len(S) or len(i) + len(j) != m:
        raise MalformedSubset(f"|i|={len(i)}, |j|={len(j)} do not fill {m} coordinates with |S|={len(S)}")
    out = []
    it_i, it_j = iter(i), iter(j)
    for c in range(1, m + 1):
        out.append(int(next(it_i) if c in S else next(it_j)))
    return tuple(out)


def coordinate_extent(index_set) -> int:
    """E(S): the largest number of distinct values any one coordinate takes on S."""
    arr = np.asarray(list(index_set) if not isinstance(index_set, np.ndarray) else index_set)
    if arr.size == 0:
        raise EmptyInput("coordinate extent of an empty index set")
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return max(len(np.unique(arr[:, c])) for c in range(arr.shape[1]))
