import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fockop.bargmann import (bargmann_basis, bargmann_point, fourier_diagonal, fourier_eigenvalues, fourier_point,
                             inverse_bargmann_basis, inverse_bargmann_point, inverse_fourier_diagonal, rotate_fock)
from fockop.errors import ParameterError
from fockop.hermite import FockVector, HermiteVector, TruncationBasis, fock_eval, psi_matrix


def _unit(N, k):
    c = np.zeros(N + 1)
    c[k] = 1
    return HermiteVector(TruncationBasis(1, N), c)


def test_psi0_maps_to_one():
    for z in (0.0, 0.5 - 0.3j, -1.2j):
        assert bargmann_point(_unit(4, 0), [z]) == pytest.approx(1.0, abs=1e-13)


def test_psi1_at_one():
    assert bargmann_point(_unit(4, 1), [1.0]) == pytest.approx(1.0, abs=1e-13)


def test_linearity(rng):
    b = TruncationBasis(1, 8)
    f = HermiteVector(b, rng.standard_normal(9))
    g = HermiteVector(b, rng.standard_normal(9))
    a, c = 0.3 - 1j, 2.0
    z = [0.4 + 0.2j]
    lhs = bargmann_point(HermiteVector(b, a * f.coeffs + c * g.coeffs), z)
    assert lhs == pytest.approx(a * bargmann_point(f, z) + c * bargmann_point(g, z), abs=1e-12)


def test_basis_map_is_identity(rng):
    b = TruncationBasis(1, 12)
    f = HermiteVector(b, rng.standard_normal(13) + 1j * rng.standard_normal(13))
    F = bargmann_basis(f)
    assert np.array_equal(F.coeffs, f.coeffs)
    assert F.norm() == f.norm()
    assert np.array_equal(inverse_bargmann_basis(F).coeffs, f.coeffs)
    for z in (0.3 + 0.1j, -0.8 + 0.5j):
        assert fock_eval(F, [z]) == pytest.approx(bargmann_point(f, [z]), abs=1e-8)


def test_basis_map_type_checks():
    with pytest.raises(ParameterError):
        bargmann_basis(FockVector.unit(TruncationBasis(1, 1), (0,)))
    with pytest.raises(ParameterError):
        inverse_bargmann_basis(_unit(2, 0))


def test_inverse_point():
    b = TruncationBasis(1, 4)
    assert inverse_bargmann_point(FockVector.unit(b, (0,)), [0.0]) == pytest.approx((2 / math.pi) ** 0.25, abs=1e-12)
    assert abs(inverse_bargmann_point(FockVector.unit(b, (1,)), [0.0])) <= 1e-12
    F = FockVector(b, [0.5, -1j, 0.25, 0, 0.1])
    for x in (-0.7, 0.4):
        ref = F.coeffs @ psi_matrix(b, np.array([[x]]))[:, 0]
        assert inverse_bargmann_point(F, [x]) == pytest.approx(ref, abs=1e-10)


def test_fourier_eigenvalues_by_quadrature():
    eig = fourier_eigenvalues(8)
    np.testing.assert_allclose(eig, (-1j) ** np.arange(9), atol=1e-8)


def test_fourier_of_psi0_and_psi1():
    b = TruncationBasis(1, 1)
    for k, lam in ((0, 1), (1, -1j)):
        fk = lambda y, k=k: psi_matrix(b, y)[k]
        for x in (0.3, 1.1):
            assert fourier_point(fk, x) == pytest.approx(lam * psi_matrix(b, np.array([[x]]))[k, 0], abs=1e-12)


def test_fourier_diagonal_four_times_identity(rng):
    f = HermiteVector(TruncationBasis(1, 9), rng.standard_normal(10) + 1j * rng.standard_normal(10))
    g = f
    for _ in range(4):
        g = fourier_diagonal(g)
    np.testing.assert_allclose(g.coeffs, f.coeffs, atol=0)
    np.testing.assert_allclose(inverse_fourier_diagonal(fourier_diagonal(f)).coeffs, f.coeffs, atol=0)


@given(st.integers(0, 2 ** 31 - 1))
def test_fourier_rotation(seed):
    r = np.random.default_rng(seed)
    b = TruncationBasis(1, 10)
    F = FockVector(b, r.standard_normal(len(b)) + 1j * r.standard_normal(len(b)))
    z = r.standard_normal((20, 1)) + 1j * r.standard_normal((20, 1))
    np.testing.assert_allclose(fock_eval(rotate_fock(F), z), fock_eval(F, -1j * z), atol=1e-10)
    np.testing.assert_allclose(fock_eval(rotate_fock(F, clockwise=False), z), fock_eval(F, 1j * z), atol=1e-10)
    G = bargmann_basis(fourier_diagonal(inverse_bargmann_basis(F)))
    np.testing.assert_allclose(fock_eval(G, z), fock_eval(F, -1j * z), atol=1e-10)


def test_unitarity_by_quadrature(rng):
    from fockop.quad import gauss_hermite, integrate_fock_measure
    b = TruncationBasis(1, 10)
    f = HermiteVector(b, rng.standard_normal(len(b)) + 1j * rng.standard_normal(len(b)))
    F = bargmann_basis(f)
    val = integrate_fock_measure(lambda z: np.abs(fock_eval(F, z)) ** 2, gauss_hermite(60), 1).real
    assert math.sqrt(val) == pytest.approx(f.norm(), rel=1e-6)
