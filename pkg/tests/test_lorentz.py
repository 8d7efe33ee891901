import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lorentzbh.errors import BadParams, WeightDomainError
from lorentzbh.lorentz import (
    POWER,
    LorentzParams,
    Weight,
    fundamental_function,
    lorentz1_dual_norm,
    lorentz_norm,
    lp_norm,
    marcinkiewicz_norm,
    power_sum,
    power_sum_bound,
    quasi_triangle_constant,
    rearrange,
    weak_norm,
    weighted_l1_norm,
)

vectors = arrays(np.float64, st.integers(1, 30), elements=st.floats(-1e3, 1e3, allow_nan=False))
p_values = st.sampled_from([1.0, 4 / 3, 1.5, 2.0, 3.0])


def telescoping_oracle(x, p, q):
    # direct transcription of the telescoping sum, no Abel summation
    xs = sorted(np.abs(x), reverse=True)
    s = sum(v**q * (k ** (q / p) - (k - 1) ** (q / p)) for k, v in enumerate(xs, start=1))
    return s ** (1 / q)


def test_rearrange_examples():
    np.testing.assert_allclose(rearrange([1 + 1j, -2, 0.5]), [2, math.sqrt(2), 0.5])
    np.testing.assert_array_equal(rearrange([0, 0, 0]), [0, 0, 0])
    np.testing.assert_array_equal(rearrange([3, 1, 2]), [3, 2, 1])


def test_lorentz_examples():
    assert lorentz_norm(np.ones(4), 4 / 3, 1) == pytest.approx(4**0.75, rel=1e-15)
    x = [1, 2**-0.75, 3**-0.75]
    assert lorentz_norm(x, 4 / 3, math.inf) == pytest.approx(1.0, rel=1e-15)


@given(vectors, p_values, st.sampled_from([1.0, 1.5, 2.0, 4.0]))
def test_telescoping_matches_direct_sum(x, p, q):
    assert lorentz_norm(x, p, q) == pytest.approx(telescoping_oracle(x, p, q), rel=1e-9, abs=1e-12)


@given(vectors, p_values)
def test_p_equals_q_is_lp(x, p):
    assert lorentz_norm(x, p, p) == pytest.approx(lp_norm(x, p), rel=1e-10, abs=1e-12)


def test_power_scheme():
    x = np.array([3.0, 1.0, 2.0])
    ref = (1 * 3**2 + 2 ** (2 / 1.5 - 1) * 2**2 + 3 ** (2 / 1.5 - 1) * 1) ** 0.5
    assert lorentz_norm(x, 1.5, 2, POWER) == pytest.approx(ref, rel=1e-14)
    assert lorentz_norm(x, 1.5, 1, POWER) != pytest.approx(lorentz_norm(x, 1.5, 1))


@given(vectors, p_values, st.sampled_from([1.0, 2.0, math.inf]), st.randoms(), st.floats(-5, 5))
def test_rearrangement_invariant_and_homogeneous(x, p, q, rnd, lam):
    y = list(x)
    rnd.shuffle(y)
    phases = np.exp(1j * np.arange(len(y)))
    base = lorentz_norm(x, p, q)
    assert lorentz_norm(np.array(y) * phases, p, q) == pytest.approx(base, rel=1e-12, abs=1e-300)
    assert lorentz_norm(lam * x, p, q) == pytest.approx(abs(lam) * base, rel=1e-12, abs=1e-300)


@given(vectors, vectors, p_values)
def test_triangle_inequality_q_le_p(x, y, p):
    d = max(x.size, y.size)
    x, y = np.resize(x, d), np.resize(y, d)
    q = 1.0
    assert lorentz_norm(x + y, p, q) <= (lorentz_norm(x, p, q) + lorentz_norm(y, p, q)) * (1 + 1e-12) + 1e-12


def test_quasi_triangle_reported(rng):
    assert quasi_triangle_constant(2.0, 1.0, rng, trials=200) <= 1 + 1e-12
    c = quasi_triangle_constant(1.5, 4.0, rng, trials=200)
    assert math.isfinite(c) and c > 0


@given(vectors, st.sampled_from([4 / 3, 1.5, 2.0, 3.0]))
def test_marcinkiewicz_sandwich(x, p):
    mp = marcinkiewicz_norm(x, p)
    w = weak_norm(x, p)
    conj = p / (p - 1)
    assert mp / conj <= w * (1 + 1e-12) + 1e-300
    assert w <= mp * (1 + 1e-12) + 1e-300


@pytest.mark.parametrize("N", [1, 2, 5, 17])
@pytest.mark.parametrize("p", [4 / 3, 2.0])
def test_marcinkiewicz_indicator(N, p):
    # brute-force sup over k of normalised partial sums
    oracle = max(k / k ** (1 - 1 / p) for k in range(1, N + 1))
    assert marcinkiewicz_norm(np.ones(N), p) == pytest.approx(oracle, rel=1e-14)
    assert oracle == pytest.approx(N ** (1 / p), rel=1e-14)
    # the k^{-1/p}-normalised functional gives N^{1/p'} on indicators
    dual_oracle = max(k / k ** (1 / p) for k in range(1, N + 1))
    assert lorentz1_dual_norm(np.ones(N), p) == pytest.approx(dual_oracle, rel=1e-14)
    assert dual_oracle == pytest.approx(N ** (1 - 1 / p), rel=1e-14)
    assert marcinkiewicz_norm([7.5], p) == 7.5


@given(vectors, vectors, p_values)
def test_dual_norm_holder(a, b, p):
    d = min(a.size, b.size)
    a, b = a[:d], b[:d]
    assert abs(np.dot(a, b)) <= lorentz_norm(a, p, 1) * lorentz1_dual_norm(b, p) * (1 + 1e-12) + 1e-9


def test_marcinkiewicz_bad_p():
    with pytest.raises(BadParams):
        marcinkiewicz_norm([1.0], 1.0)


def test_bad_params():
    with pytest.raises(BadParams):
        LorentzParams(0.5)
    with pytest.raises(BadParams):
        LorentzParams(2.0, 0.5)
    with pytest.raises(BadParams):
        lorentz_norm([1], 2.0, 1.0, "other")


def test_fundamental_function():
    X = LorentzParams(4 / 3, 1)
    assert fundamental_function(X, 16) == pytest.approx(8.0, rel=1e-15)
    assert fundamental_function(LorentzParams(1.7, 1), 1) == 1.0
    ratios = [fundamental_function(X, N) / N for N in range(1, 200)]
    assert all(b <= a for a, b in zip(ratios, ratios[1:]))
    with pytest.raises(BadParams):
        fundamental_function(X, 0)


def test_params_properties():
    X = LorentzParams(4 / 3)
    assert X.conjugate == pytest.approx(4.0)
    assert X.theta == pytest.approx(0.25)
    assert LorentzParams(1.0).conjugate == math.inf


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_power_sum_bound_strict(alpha):
    N = np.arange(1, 10**5 + 1)
    assert np.all(power_sum(10**5, alpha) < power_sum_bound(N, alpha))
    with pytest.raises(BadParams):
        power_sum_bound(3, 1.0)


def test_weighted_l1():
    w = Weight(lambda n: math.log(n) ** 0.5 / n**0.25, "omega")
    assert weighted_l1_norm({2: 1.0}, w) == pytest.approx(math.log(2) ** 0.5 / 2**0.25, rel=1e-15)
    assert weighted_l1_norm([0, 0, 0], w) == 0.0
    assert weighted_l1_norm({7: 1 / w(7)}, w) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(WeightDomainError):
        weighted_l1_norm({1: 1.0}, w)  # log 1 = 0 is not a positive weight
    with pytest.raises(WeightDomainError):
        weighted_l1_norm([1, 2, 3], Weight([1.0, 2.0]))
