"""Multilinear forms and m-homogeneous polynomials: evaluation, symmetrisation,
polarisation, sup-norm estimation on the polytorus, and JSON I/O."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import minimize

from . import kernels
from ._rng import make_rng
from .errors import BadParams, InstanceTooLarge, SymmetryViolation
from .mixed import CoefficientTensor, is_symmetric
from .multiindex import (
    ENUMERATION_LIMIT,
    FULL,
    NONDECREASING,
    IndexSetSpec,
    cardinalities,
    enumerate_indices,
)

DEFAULT_STARTS = 32
DEFAULT_SWEEPS = 200
DEFAULT_TOL = 1e-12
DEFAULT_GRID = 720
GRID_MAX_VARIABLES = 3


@dataclass
class PolynomialCoefficients:
    """Coefficients (c_j) of P(z) = sum_{j in J(m,n)} c_j z_{j_1}...z_{j_m}.

    ``values`` is aligned with ``enumerate_indices(IndexSetSpec(m, n, 'nondecreasing'))``.
    """

    m: int
    n: int
    values: np.ndarray

    def __post_init__(self):
        spec = self.spec
        if spec.size > ENUMERATION_LIMIT:
            raise InstanceTooLarge(f"J({self.m},{self.n}) has {spec.size} entries")
        self.values = np.asarray(self.values, dtype=complex).ravel()
        if self.values.size != spec.size:
            raise BadParams(f"expected {spec.size} coefficients for J({self.m},{self.n}), got {self.values.size}")

    @property
    def spec(self) -> IndexSetSpec:
        return IndexSetSpec(self.m, self.n, NONDECREASING)

    @cached_property
    def indices(self) -> np.ndarray:
        return enumerate_indices(self.spec)

    @cached_property
    def exponents(self) -> np.ndarray:
        """Multi-exponents alpha (count, n) with z^alpha = z_{j_1}...z_{j_m}."""
        idx = self.indices
        out = np.zeros((idx.shape[0], self.n), dtype=np.int64)
        for c in range(self.m):
            np.add.at(out, (np.arange(idx.shape[0]), idx[:, c] - 1), 1)
        return out

    def position(self, index) -> int:
        j = tuple(sorted(int(v) for v in index))
        hit = np.flatnonzero((self.indices == j).all(axis=1))
        if hit.size == 0:
            raise BadParams(f"{index} not in J({self.m},{self.n})")
        return int(hit[0])

    def __getitem__(self, index):
        return self.values[self.position(index)]

    def __call__(self, z) -> complex:
        z = np.asarray(z, dtype=complex)
        if z.shape != (self.n,):
            raise BadParams(f"point has shape {z.shape}, expected ({self.n},)")
        return complex(np.sum(self.values * np.prod(z[self.indices - 1], axis=1)))

    @classmethod
    def from_entries(cls, m: int, n: int, entries) -> "PolynomialCoefficients":
        p = cls.zeros(m, n)
        for index, v in dict(entries).items():
            if len(index) != m or any(not 1 <= c <= n for c in index):
                raise BadParams(f"index {index} outside J({m},{n})")
            p.values[p.position(index)] = v
        return p

    @classmethod
    def zeros(cls, m: int, n: int) -> "PolynomialCoefficients":
        return cls(m, n, np.zeros(IndexSetSpec(m, n, NONDECREASING).size, dtype=complex))


@dataclass
class SupNormEstimate:
    """Bracket for a sup norm on the polydisc.

    ``lower`` is attained at ``witness``; ``upper`` is a certified bound when
    known (exact families, grid oracle), else None.
    """

    lower: float
    upper: float | None = None
    witness: list = field(default_factory=list)
    method: str = "alternating"

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper * (1 + 1e-12) + 1e-300:
            raise BadParams(f"sup-norm bracket inverted: {self.lower} > {self.upper}")

    @property
    def certified(self) -> bool:
        return self.upper is not None

    @classmethod
    def exact(cls, value: float, witness=None) -> "SupNormEstimate":
        return cls(float(value), float(value), witness or [], "exact-family")


def polarization_factor(m: int) -> float:
    """m^m/m!, the norm loss from a polynomial to its symmetric m-linear form."""
    if m < 1:
        raise BadParams(f"m={m} must be >= 1")
    return m**m / math.factorial(m)


def poly_from_symmetric(a: CoefficientTensor) -> PolynomialCoefficients:
    """c_j = card[j] a_j for j in J(m,n)."""
    vals = a.values if isinstance(a, CoefficientTensor) else np.asarray(a, dtype=complex)
    if not is_symmetric(vals):
        raise SymmetryViolation("polynomial coefficients need a symmetric tensor")
    m, n = vals.ndim, vals.shape[0]
    J = enumerate_indices(IndexSetSpec(m, n, NONDECREASING))
    card = cardinalities(J)
    return PolynomialCoefficients(m, n, card * vals[tuple((J - 1).T)])


def symmetric_from_poly(c: PolynomialCoefficients) -> CoefficientTensor:
    """The symmetric tensor a with a_i = c_{[i]} / card[i]."""
    M = enumerate_indices(IndexSetSpec(c.m, c.n, FULL))
    sorted_M = np.sort(M, axis=1)
    # position of each sorted index inside the lexicographic J(m,n) list
    J = c.indices
    base = c.n + 1
    key_J = (J * base ** np.arange(c.m - 1, -1, -1)).sum(axis=1)
    key_M = (sorted_M * base ** np.arange(c.m - 1, -1, -1)).sum(axis=1)
    pos = np.searchsorted(key_J, key_M)
    card = cardinalities(J)
    vals = (c.values / card)[pos].reshape((c.n,) * c.m)
    return CoefficientTensor(vals, symmetric=True)


def eval_form(a, *xs) -> complex:
    """sum_i a_i x^1_{i_1} ... x^m_{i_m}."""
    vals = a.values if isinstance(a, CoefficientTensor) else np.asarray(a, dtype=complex)
    m, n = vals.ndim, vals.shape[0]
    if len(xs) == 1 and np.ndim(xs[0]) == 2:
        xs = tuple(xs[0])
    if len(xs) != m:
        raise BadParams(f"form of arity {m} needs {m} vectors, got {len(xs)}")
    res = vals
    for x in reversed(xs):
        x = np.asarray(x, dtype=complex)
        if x.shape != (n,):
            raise BadParams(f"argument of shape {x.shape}, expected ({n},)")
        res = res @ x
    return complex(res)


def supnorm_form(
    a,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
    sweeps: int = DEFAULT_SWEEPS,
    tol: float = DEFAULT_TOL,
) -> SupNormEstimate:
    """Lower estimate of ||a||_inf by multistart alternating phase ascent.

    Each start draws random unimodular arguments from the stream (seed, start)
    and runs block-coordinate ascent to stationarity; the best value wins.
    """
    vals = a.values if isinstance(a, CoefficientTensor) else np.asarray(a, dtype=complex)
    m, n = vals.ndim, vals.shape[0]
    flat = np.ascontiguousarray(vals.ravel())
    best_val, best_X = -1.0, None
    for s in range(starts):
        rng = make_rng(seed, s)
        X0 = np.exp(2j * np.pi * rng.random((m, n)))
        val, X, _, min_gain = kernels.alternating_ascent(flat, m, n, X0, sweeps, tol)
        if min_gain < -1e-10:
            raise RuntimeError(f"alternating ascent decreased the form value (relative change {min_gain})")
        if val > best_val:
            best_val, best_X = val, X
    witness = [np.asarray(x) for x in best_X]
    lower = abs(eval_form(vals, *witness))
    return SupNormEstimate(lower, None, witness, "alternating")


def _poly_value_and_grad(theta, exps_free, coeffs, exps_fixed_phase):
    phase = exps_free @ theta
    terms = coeffs * exps_fixed_phase * np.exp(1j * phase)
    P = terms.sum()
    dP = 1j * (exps_free * terms[:, None]).sum(axis=0)
    return P, dP


def supnorm_poly(
    c: PolynomialCoefficients,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
    grid: int | None = DEFAULT_GRID,
) -> SupNormEstimate:
    """Sup norm of P on the polydisc (attained on the torus by homogeneity).

    z_1 is pinned to 1 since |P(e^{is} z)| = |P(z)|. Seeded multistart
    quasi-Newton ascent on the remaining angles always runs; for n <= 3 the
    grid oracle also runs and supplies a certified upper bound.
    """
    n = c.n
    exps = c.exponents
    coeffs = c.values
    if not np.any(coeffs):
        return SupNormEstimate(0.0, 0.0, [np.ones(n, dtype=complex)], "grid")
    if n == 1:
        val = abs(coeffs.sum())
        return SupNormEstimate(val, val, [np.ones(1, dtype=complex)], "grid")
    free = exps[:, 1:].astype(float)
    ones = np.ones(len(coeffs))
    best_val, best_theta = -1.0, None

    def neg_sq(theta):
        P, dP = _poly_value_and_grad(theta, free, coeffs, ones)
        return -(P.real**2 + P.imag**2), -2.0 * np.real(np.conj(P) * dP)

    upper = None
    method = "gradient"
    if grid and n <= GRID_MAX_VARIABLES:
        gval, gpos, upper = kernels.poly_grid(exps, coeffs, grid)
        digits = np.unravel_index(gpos, (grid,) * (n - 1))
        theta0 = 2 * np.pi * np.asarray(digits, dtype=float) / grid
        res = minimize(neg_sq, theta0, jac=True, method="BFGS", options={"gtol": 1e-12})
        best_val, best_theta = -res.fun, res.x
        if gval**2 > best_val:
            best_val, best_theta = gval**2, theta0
        method = "grid"
    for s in range(starts):
        rng = make_rng(seed, s)
        theta0 = 2 * np.pi * rng.random(n - 1)
        res = minimize(neg_sq, theta0, jac=True, method="BFGS", options={"gtol": 1e-12})
        if -res.fun > best_val:
            best_val, best_theta = -res.fun, res.x
    z = np.concatenate([[1.0 + 0j], np.exp(1j * best_theta)])
    lower = abs(c(z))
    if upper is not None:
        upper = max(upper, lower)
    return SupNormEstimate(lower, upper, [z], method)


def rank_one(*vectors) -> tuple:
    """u^1 (x) ... (x) u^m with its exact sup norm prod ||u^k||_1."""
    vecs = [np.asarray(v, dtype=complex) for v in vectors]
    vals = vecs[0]
    for v in vecs[1:]:
        vals = np.multiply.outer(vals, v)
    tensor = CoefficientTensor(vals, label="rank-one")
    witness = [np.where(np.abs(v) > 0, np.conj(v) / np.where(np.abs(v) > 0, np.abs(v), 1), 1) for v in vecs]
    exact = math.prod(float(np.abs(v).sum()) for v in vecs)
    return tensor, SupNormEstimate.exact(exact, witness)


def monomial_tensor(m: int, n: int, index, value: complex = 1.0) -> tuple:
    """Tensor with a single nonzero entry; its sup norm is |value|."""
    tensor = CoefficientTensor.from_entries(m, n, {tuple(index): value})
    tensor.label = "monomial"
    witness = [np.ones(n, dtype=complex) for _ in range(m)]
    witness[0] = witness[0] * (np.conj(value) / abs(value) if value != 0 else 1)
    return tensor, SupNormEstimate.exact(abs(value), witness)


# -- JSON ---------------------------------------------------------------------


def _entry(index, v):
    return {"index": [int(c) for c in index], "re": float(np.real(v)), "im": float(np.imag(v))}


def to_json(obj) -> str:
    """Serialise a CoefficientTensor or PolynomialCoefficients; zero entries are omitted."""
    if isinstance(obj, CoefficientTensor):
        idx = enumerate_indices(obj.spec)
        vals = obj.flat
        kind = FULL
        m, n = obj.m, obj.n
    elif isinstance(obj, PolynomialCoefficients):
        idx, vals, kind, m, n = obj.indices, obj.values, NONDECREASING, obj.m, obj.n
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    entries = [_entry(i, v) for i, v in zip(idx, vals) if v != 0]
    return json.dumps({"m": m, "n": n, "kind": kind, "entries": entries}, sort_keys=True)


def from_json(text: str):
    doc = json.loads(text) if isinstance(text, str) else text
    try:
        m, n, kind = int(doc["m"]), int(doc["n"]), doc.get("kind", FULL)
        entries = {tuple(e["index"]): complex(e.get("re", 0.0), e.get("im", 0.0)) for e in doc["entries"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise BadParams(f"malformed tensor JSON: {exc}") from exc
    if kind == FULL:
        return CoefficientTensor.from_entries(m, n, entries)
    if kind == NONDECREASING:
        for index in entries:
            if list(index) != sorted(index):
                raise BadParams(f"index {index} is not nondecreasing")
        return PolynomialCoefficients.from_entries(m, n, entries)
    raise BadParams(f"unknown kind {kind!r}")
