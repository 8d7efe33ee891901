import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import factorint, primerange

from lorentzbh.bhlab.constants import chain_constant
from lorentzbh.errors import BadParams, DomainError
from lorentzbh.forms import PolynomialCoefficients, SupNormEstimate
from lorentzbh.lorentz import lorentz_norm
from lorentzbh.dirichlet import (
    DirichletCoefficients,
    PrimePowerIndex,
    bcq_weight,
    bohr_lift,
    bohr_unlift,
    corollary_membership,
    decreasing_weight_comparison,
    lift_index,
    lift_many,
    non_embedding_witnesses,
    nth_prime,
    omega_count,
    omega_table,
    prime_table,
    dirichlet_lorentz_check,
    theorem58_check,
    unlift_index,
    unlift_many,
)


def test_prime_table_matches_oracle():
    assert prime_table(10**4).tolist() == list(primerange(2, 10**4 + 1))
    assert nth_prime(1) == 2 and nth_prime(4) == 7
    with pytest.raises(DomainError):
        nth_prime(0)


def test_lift_examples():
    assert lift_index((1, 1, 2)) == 12
    assert lift_index((1, 2)) == 6
    assert unlift_index(12, 3) == (1, 1, 2)
    with pytest.raises(DomainError):
        unlift_index(12, 2)
    pp = PrimePowerIndex.from_n(12)
    assert pp.alpha == (2, 1) and pp.m == 3
    with pytest.raises(BadParams):
        PrimePowerIndex(13, (2, 1))


@given(st.integers(2, 10**6))
def test_unlift_matches_sympy(n):
    fac = factorint(n)
    expected = tuple(sorted(int(np.searchsorted(prime_table(), p)) + 1 for p, e in fac.items() for _ in range(e)))
    assert unlift_index(n) == expected
    assert omega_count(n) == sum(fac.values())
    assert lift_index(expected) == n


def test_vectorised_roundtrip_small():
    N = 5000
    om = omega_table(N)
    for m in (2, 3):
        ns = np.flatnonzero(om == m)
        J = unlift_many(ns, m)
        assert np.all(np.diff(J, axis=1) >= 0)
        np.testing.assert_array_equal(lift_many(J), ns)
        for n, j in zip(ns[:50], J[:50]):
            assert unlift_index(int(n), m) == tuple(j)
    with pytest.raises(DomainError):
        unlift_many([12], 2)


def test_omega_table_matches_sympy():
    om = omega_table(3000)
    assert [int(om[n]) for n in range(2, 3001)] == [sum(factorint(n).values()) for n in range(2, 3001)]


def test_bohr_lift_roundtrip_and_support(rng):
    for m, n in ((2, 3), (3, 4)):
        size = PolynomialCoefficients.zeros(m, n).values.size
        c = PolynomialCoefficients(m, n, rng.normal(size=size) + 1j * rng.normal(size=size))
        D = bohr_lift(c)
        assert all(omega_count(k) == m for k in D.entries)
        back = bohr_unlift(D, n)
        np.testing.assert_array_equal(back.values, c.values)
        p = 2 * m / (m + 1)
        assert lorentz_norm(D.values(), p, 1) == pytest.approx(lorentz_norm(c.values, p, 1), rel=1e-12)
        assert DirichletCoefficients.from_json(D.to_json()).entries == D.entries
    with pytest.raises(DomainError):
        DirichletCoefficients(2, {12: 1.0})


def test_bcq_weight():
    assert bcq_weight(2, 2) == pytest.approx(math.log(2) ** 0.5 / 2**0.25)
    assert bcq_weight(2, 2) == pytest.approx(0.70, abs=0.005)
    np.testing.assert_allclose(bcq_weight(np.arange(2, 50), 1), 1.0)
    n = round(math.e**4)
    assert bcq_weight(n, 3) == pytest.approx(math.log(55) / 55 ** (1 / 3), rel=1e-14)
    with pytest.raises(DomainError):
        bcq_weight(1, 2)


def test_dirichlet_lorentz_examples():
    for m in (2, 3):
        c = PolynomialCoefficients.from_entries(m, 2, {(1,) * m: 1.0})
        D = bohr_lift(c)
        assert list(D.entries) == [2**m]
        rep = dirichlet_lorentz_check(c, SupNormEstimate.exact(1.0))
        assert rep.lhs == 1.0 and rep.verdict == "holds"
    c = PolynomialCoefficients.from_entries(2, 2, {(1, 2): 1.0})
    assert list(bohr_lift(c).entries) == [6]
    rep = dirichlet_lorentz_check(c, SupNormEstimate.exact(1.0))
    assert rep.lhs == 1.0 <= chain_constant(2)


def test_non_embedding_tables():
    g = non_embedding_witnesses(2, N_max=10**8, N_sum=10**4, N_min=10**2)
    n = g.atoms[-1]["n"]
    assert g.atoms[-1]["value"] == pytest.approx(n**0.25 / math.log(n) ** 0.5, rel=1e-12)
    assert g.atoms[0]["n"] == 2 and 0 < g.atoms[0]["value"] < math.inf
    assert g.atoms_increasing and g.atoms_growth > 10
    assert g.sums_increasing and g.sums[-1]["ratio"] > g.sums[0]["ratio"]
    # independent summation for the last row
    N = g.sums[-1]["N"]
    direct = math.fsum(math.log(k) ** 0.5 / k**0.25 for k in range(2, N + 1))
    assert g.sums[-1]["weight_sum"] == pytest.approx(direct, rel=1e-12)
    with pytest.raises(BadParams):
        non_embedding_witnesses(1)


def test_corollary_membership(rng):
    for m in (2, 3):
        c = PolynomialCoefficients.from_entries(m, 2, {(1,) * m: 1.0})
        rep = corollary_membership(c)
        assert rep.weighted_l1 == pytest.approx(bcq_weight(2**m, m))
        assert rep.lorentz == 1.0
    z = corollary_membership(PolynomialCoefficients.zeros(2, 3))
    assert (z.weighted_l1, z.lorentz) == (0.0, 0.0)
    c = PolynomialCoefficients(2, 3, rng.normal(size=6))
    rep = corollary_membership(c)
    direct = math.fsum(abs(v) * bcq_weight(lift_index(j), 2) for j, v in zip(c.indices, c.values))
    assert rep.finite and rep.weighted_l1 == pytest.approx(direct, rel=1e-12)


@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=40), st.integers(2, 4))
def test_decreasing_weight_comparison(x, m):
    raw, rearranged = decreasing_weight_comparison(x, m)
    assert raw <= rearranged * (1 + 1e-12) + 1e-12


def test_interface_alias():
    assert theorem58_check is dirichlet_lorentz_check
