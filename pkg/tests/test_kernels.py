import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lorentzbh import kernels
from lorentzbh.forms import PolynomialCoefficients
from lorentzbh.kernels import available_backends

BACKENDS = available_backends()


def test_python_backend_always_present():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


def _instance(seed, m, n):
    r = np.random.default_rng(seed)
    a = r.normal(size=n**m) + 1j * r.normal(size=n**m)
    X = np.exp(2j * np.pi * r.random((m, n)))
    return a, X


def _contract_oracle(a, m, n, X, k):
    # einsum over all axes but k
    letters = "abcdefgh"[:m]
    ops = [a.reshape((n,) * m)] + [X[c] for c in range(m) if c != k]
    spec = ",".join([letters] + [letters[c] for c in range(m) if c != k]) + "->" + letters[k]
    return np.einsum(spec, *ops)


@pytest.mark.parametrize("name", sorted(BACKENDS))
@given(st.integers(0, 2**31), st.integers(1, 4), st.integers(1, 4), st.data())
def test_contract_except_matches_einsum(name, seed, m, n, data):
    k = data.draw(st.integers(0, m - 1))
    a, X = _instance(seed, m, n)
    got = BACKENDS[name].contract_except(a, m, n, X, k)
    np.testing.assert_allclose(got, _contract_oracle(a, m, n, X, k), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("m,n", [(2, 3), (3, 3), (4, 2)])
def test_ascent_backends_agree(seed, m, n):
    a, X = _instance(seed, m, n)
    out = {name: K.alternating_ascent(a, m, n, X, 200, 1e-12) for name, K in BACKENDS.items()}
    ref = out["python"]
    for name, (val, Xo, sweeps, gain) in out.items():
        assert gain >= -1e-10, name
        assert val == pytest.approx(ref[0], rel=1e-9)
        assert sweeps == ref[2]
        np.testing.assert_allclose(np.abs(Xo), 1.0, rtol=1e-12)


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 3)])
def test_poly_grid_backends_agree(seed, m, n):
    r = np.random.default_rng(seed)
    c = PolynomialCoefficients(m, n, r.normal(size=PolynomialCoefficients.zeros(m, n).values.size) + 0j)
    out = {name: K.poly_grid(c.exponents, c.values, 90) for name, K in BACKENDS.items()}
    ref = out["python"]
    for name, (best, pos, upper) in out.items():
        assert best == pytest.approx(ref[0], rel=1e-12)
        # grid maxima can tie exactly, so compare the value at the returned cell
        digits = np.unravel_index(pos, (90,) * (n - 1))
        z = np.concatenate([[1.0], np.exp(2j * np.pi * np.asarray(digits) / 90)])
        assert abs(c(z)) == pytest.approx(best, rel=1e-12)
        assert upper == pytest.approx(ref[2], rel=1e-12)
        assert best <= upper


def test_poly_grid_value_matches_direct_evaluation():
    c = PolynomialCoefficients.from_entries(2, 2, {(1, 1): 1, (1, 2): -2j, (2, 2): 0.5})
    G = 64
    best, pos, upper = available_backends()["python"].poly_grid(c.exponents, c.values, G)
    vals = [abs(c(np.array([1, np.exp(2j * np.pi * g / G)]))) for g in range(G)]
    assert best == pytest.approx(max(vals), rel=1e-12)
    assert vals[pos] == pytest.approx(best, rel=1e-12)
