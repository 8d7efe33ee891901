"""Lower-bound constructions: the Fourier-matrix tensor and random-sign
polynomials, plus the exponent-optimality sweep."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ._rng import make_rng
from .errors import BadParams, InstanceTooLarge
from .forms import PolynomialCoefficients, SupNormEstimate, supnorm_form, supnorm_poly
from .lorentz import LorentzParams, fundamental_function
from .mixed import CoefficientTensor
from .multiindex import ENUMERATION_LIMIT, NONDECREASING, IndexSetSpec

CSV_COLUMNS = ("N", "phi", "sup_bound", "ascent_estimate", "ratio")


def fourier_matrix(N: int) -> np.ndarray:
    """a_{rs} = exp(2 pi i r s / N) for r, s = 1..N."""
    if N < 1:
        raise BadParams(f"N={N} must be >= 1")
    r = np.arange(1, N + 1)
    roots = np.exp(2j * np.pi * np.arange(N) / N)
    return roots[np.outer(r, r) % N]


def orthogonality_residual(A) -> float:
    """max |A A^H - N I|."""
    A = np.asarray(A)
    N = A.shape[0]
    return float(np.abs(A @ A.conj().T - N * np.eye(N)).max())


@dataclass
class FourierTensor:
    N: int
    m: int
    tensor: CoefficientTensor

    @property
    def values(self) -> np.ndarray:
        return self.tensor.values

    @property
    def sup_bound(self) -> float:
        """Analytic upper bound N^{(m+1)/2} for the sup norm of the form."""
        return float(self.N ** ((self.m + 1) / 2))

    def orthogonality_residual(self) -> float:
        return orthogonality_residual(fourier_matrix(self.N))


def fourier_tensor(N: int, m: int) -> FourierTensor:
    """a_{i_1..i_m} = a_{i_1 i_2} a_{i_2 i_3} ... a_{i_{m-1} i_m}."""
    if N < 2 or m < 2:
        raise BadParams(f"Fourier tensor needs N >= 2 and m >= 2, got N={N}, m={m}")
    if N**m > ENUMERATION_LIMIT:
        raise InstanceTooLarge(f"N^m = {N**m} exceeds the enumeration cap")
    r = np.arange(1, N + 1)
    # exact integer phase: sum_k i_k i_{k+1} mod N
    phase = np.zeros((N,) * m, dtype=np.int64)
    for k in range(m - 1):
        shape = [1] * m
        shape[k] = N
        a = r.reshape(shape)
        shape = [1] * m
        shape[k + 1] = N
        phase = phase + a * r.reshape(shape)
    roots = np.exp(2j * np.pi * np.arange(N) / N)
    vals = roots[phase % N]
    return FourierTensor(N, m, CoefficientTensor(vals, label=f"fourier-N{N}-m{m}"))


def certified_fourier(N: int, m: int, starts: int = 32, seed: int = 0) -> tuple:
    """Fourier tensor with sup-norm bracket [ascent value, N^{(m+1)/2}]."""
    ft = fourier_tensor(N, m)
    est = supnorm_form(ft.tensor, starts=starts, seed=seed)
    return ft.tensor, SupNormEstimate(est.lower, max(ft.sup_bound, est.lower), est.witness, est.method)


def optimality_experiment(N_range, m: int, X: LorentzParams, starts: int = 8, seed: int = 0) -> list:
    """Rows (N, phi(N^m), N^{(m+1)/2}, ascent estimate, phi/bound) for each N.

    Unimodular entries make ||a||_X = phi_X(N^m).
    """
    rows = []
    for N in N_range:
        ft = fourier_tensor(int(N), m)
        phi = fundamental_function(X, ft.N**m)
        bound = ft.sup_bound
        est = supnorm_form(ft.tensor, starts=starts, seed=seed).lower
        if est > bound * (1 + 1e-6):
            raise RuntimeError(f"ascent value {est} exceeds the analytic bound {bound} at N={N}")
        rows.append({"N": ft.N, "phi": phi, "sup_bound": bound, "ascent_estimate": est, "ratio": phi / bound})
    return rows


def loglog_slope(rows, column: str = "ratio") -> float:
    N = np.array([r["N"] for r in rows], dtype=float)
    y = np.array([r[column] for r in rows], dtype=float)
    return float(np.polyfit(np.log(N), np.log(y), 1)[0])


def rows_to_csv(rows, columns=CSV_COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


def ksz_bound(N: int, m: int, C: float = 1.0) -> float:
    """C (N binom(m+N-1, m) log m)^{1/2}."""
    if m < 2:
        raise BadParams("the random-sign bound degenerates at m = 1")
    return C * math.sqrt(N * math.comb(m + N - 1, m) * math.log(m))


@dataclass
class KSZResult:
    signs: np.ndarray
    estimate: SupNormEstimate
    bound: float
    trials: int

    @property
    def fitted_constant(self) -> float:
        """Empirical C with best sup = C * bound(C=1)."""
        return self.estimate.lower / self.bound


def ksz_random_poly(N: int, m: int, trials: int, seed: int = 0, starts: int = 8, grid: int | None = 240) -> KSZResult:
    """Best of ``trials`` random-sign m-homogeneous polynomials in N variables.

    Each trial's signs come from stream (seed, trial); the sup norm is the
    ascent/grid estimate, and the smallest estimate wins (ties: first trial).
    """
    spec = IndexSetSpec(m, N, NONDECREASING)
    if spec.size > ENUMERATION_LIMIT:
        raise InstanceTooLarge(f"|J({m},{N})| = {spec.size} exceeds the cap")
    bound = ksz_bound(N, m)
    best = None
    for t in range(trials):
        rng = make_rng(seed, t)
        signs = rng.choice(np.array([-1.0, 1.0]), size=spec.size)
        est = supnorm_poly(PolynomialCoefficients(m, N, signs), starts=starts, seed=seed, grid=grid)
        if best is None or est.lower < best[1].lower:
            best = (signs, est)
    return KSZResult(best[0], best[1], bound, trials)
