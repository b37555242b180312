import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fockop.errors import DomainError, EvaluationError, ParameterError
from fockop.gallery import closed_symbol, hilbert_symbol
from fockop.hermite import FockVector, TruncationBasis, fock_eval
from fockop.multiplier import named_multiplier
from fockop.symbol import (adjoint_symbol, multiplier_from_symbol_coeffs, multiplier_from_symbol_integral,
                           symbol_coeffs, symbol_from_dict, symbol_from_multiplier, symbol_point)


def _random_z(rng, k, r=2.0):
    z = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return z / np.abs(z) * r * rng.uniform(0, 1, k)


def test_symbol_point_examples(rng):
    one = named_multiplier("identity")
    for z in _random_z(rng, 5):
        assert symbol_point(one, z) == pytest.approx(1.0, abs=1e-12)
    assert abs(symbol_point(named_multiplier("hilbert"), 0.0)) <= 1e-15
    g = named_multiplier("gaussian", a=0.25)
    assert symbol_point(g, 0.0) == pytest.approx(0.7071067811865476, abs=1e-13)
    z = 0.9 - 0.4j
    assert symbol_point(g, z) == pytest.approx(np.exp(z * z / 4) / math.sqrt(2), abs=1e-12)


def test_symbol_point_overflow_guard():
    with pytest.raises(EvaluationError):
        symbol_point(named_multiplier("identity"), 60.0)


def test_symbol_point_against_erfi():
    from scipy.special import erfi
    z = 0.7 + 0.3j
    ref = erfi(z / math.sqrt(2) + 0j)
    assert symbol_point(named_multiplier("hilbert"), z) == pytest.approx(ref, abs=1e-7)
    assert hilbert_symbol(z) == pytest.approx(ref, abs=1e-12)


def test_coeffs_identity():
    c = symbol_coeffs(named_multiplier("identity"), TruncationBasis(1, 20)).coeffs
    assert c[0] == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(c[1:])) <= 1e-10


def test_coeffs_match_pointwise(rng):
    for name in ("hilbert", "sin", "gaussian"):
        m = named_multiplier(name)
        F = symbol_coeffs(m, TruncationBasis(1, 64))
        z = _random_z(rng, 20)
        np.testing.assert_allclose(fock_eval(F, z[:, None]), symbol_point(m, z[:, None]), atol=1e-7)


def test_coeffs_two_dimensional(rng):
    m = named_multiplier("riesz", j=1, n=2)
    F = symbol_coeffs(m, TruncationBasis(2, 30))
    z = 0.4 * (rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2)))
    np.testing.assert_allclose(fock_eval(F, z), symbol_point(m, z), atol=1e-5)


def test_parity_transfer():
    b = TruncationBasis(1, 40)
    odd = symbol_coeffs(named_multiplier("hilbert"), b).coeffs
    even = symbol_coeffs(named_multiplier("cos"), b).coeffs
    assert np.max(np.abs(odd[b.degrees % 2 == 0])) <= 1e-14
    assert np.max(np.abs(even[b.degrees % 2 == 1])) <= 1e-14


def test_membership_stable_in_N():
    m = named_multiplier("sin")
    n32 = symbol_coeffs(m, TruncationBasis(1, 32)).norm()
    n64 = symbol_coeffs(m, TruncationBasis(1, 64)).norm()
    assert abs(n64 ** 2 - n32 ** 2) <= 1e-6
    h = [symbol_coeffs(named_multiplier("hilbert"), TruncationBasis(1, N)).norm() for N in (32, 64, 128)]
    assert np.all(np.diff(h) >= 0) and h[-1] <= 1.0


def test_recover_identity_and_sin():
    one = FockVector.unit(TruncationBasis(1, 8), (0,))
    x = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(multiplier_from_symbol_coeffs(one, x[:, None]), 1.0, atol=1e-14)
    F = symbol_coeffs(named_multiplier("sin"), TruncationBasis(1, 96))
    assert multiplier_from_symbol_coeffs(F, 0.5) == pytest.approx(0.4794255386, abs=1e-6)
    np.testing.assert_allclose(multiplier_from_symbol_coeffs(F, x[:, None]), np.sin(x), atol=1e-6)


def test_recover_domain_error():
    one = FockVector.unit(TruncationBasis(1, 8), (0,))
    with pytest.raises(DomainError):
        multiplier_from_symbol_coeffs(one, 4.5)


@pytest.mark.xfail(strict=True, reason="truncated Hermite series of a jump converges too slowly at N=64; "
                                       "see the trend test below")
def test_recover_hilbert_at_one_n64():
    F = symbol_coeffs(named_multiplier("hilbert"), TruncationBasis(1, 64))
    assert abs(multiplier_from_symbol_coeffs(F, 1.0) - (-1j)) <= 2e-2


def test_recover_hilbert_converges_with_N():
    errs = [abs(multiplier_from_symbol_coeffs(symbol_coeffs(named_multiplier("hilbert"), TruncationBasis(1, N)),
                                              1.0) + 1j) for N in (64, 128, 256)]
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.slow
def test_recover_literal_integral():
    one = closed_symbol("identity")
    assert multiplier_from_symbol_integral(one, 0.0, order=24) == pytest.approx(1.0, abs=1e-4)
    assert multiplier_from_symbol_integral(one, 1.3, order=24) == pytest.approx(1.0, abs=1e-4)
    g = closed_symbol("gaussian", a=0.25)
    assert multiplier_from_symbol_integral(g, 0.0, order=32) == pytest.approx(1.0, abs=1e-3)


def test_literal_integral_cost_guard():
    with pytest.raises(ParameterError):
        multiplier_from_symbol_integral(closed_symbol("identity"), 0.0, order=41)


def test_adjoint_symbol():
    x = np.linspace(-2, 2, 9)[:, None]
    assert np.all(adjoint_symbol(named_multiplier("identity"))(x) == 1)
    np.testing.assert_array_equal(adjoint_symbol(named_multiplier("hilbert"))(x), 1j * np.sign(x[:, 0]))
    g = named_multiplier("gaussian")
    np.testing.assert_array_equal(adjoint_symbol(g)(x), g(x))


def test_symbol_serialisation():
    s = symbol_from_multiplier(named_multiplier("sin"), TruncationBasis(1, 16))
    back = symbol_from_dict(s.to_dict())
    assert np.array_equal(back.coeffs.coeffs, s.coeffs.coeffs)
    cf = symbol_from_dict(closed_symbol("gaussian", a=0.2).to_dict())
    assert cf(0.0) == pytest.approx(math.sqrt(0.6))
    with pytest.raises(ParameterError):
        symbol_from_dict({})


@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_closed_gaussian_matches_quadrature(re, im):
    a = 0.3
    z = complex(re, im)
    assert symbol_point(named_multiplier("gaussian", a=a), z) == pytest.approx(closed_symbol("gaussian", a=a)(z),
                                                                               abs=1e-10)
