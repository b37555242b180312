import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fockop.errors import EvaluationError, ParameterError
from fockop.hermite import (FockVector, HermiteVector, TruncationBasis, fock_eval, psi_eval, psi_matrix,
                            reproducing_kernel, weyl_apply)
from fockop.quad import gauss_hermite, gaussian_cubature, integrate_fock_measure
from scipy.special import eval_hermite


def test_psi_at_zero():
    assert psi_eval((0,), 0.0) == pytest.approx(0.8932438417380023, rel=1e-15)
    assert psi_eval((1,), 0.0) == 0.0


@pytest.mark.parametrize("k", [0, 1, 2, 5, 11, 20])
def test_psi_against_scipy_hermite(k):
    x = np.linspace(-3, 3, 13)
    ref = (2 / math.pi) ** 0.25 / math.sqrt(2.0 ** k * math.factorial(k)) * eval_hermite(k, math.sqrt(2) * x) \
        * np.exp(-x * x)
    got = np.array([psi_eval((k,), v) for v in x])
    np.testing.assert_allclose(got, ref, rtol=1e-11, atol=1e-14)


def test_psi_orthogonality_and_gram():
    cub = gaussian_cubature(200, 1)
    basis = TruncationBasis(1, 6)
    psi = psi_matrix(basis, cub.points)
    gram = (psi * cub.weights) @ psi.T
    assert abs(gram[0, 2]) <= 1e-12
    np.testing.assert_allclose(gram, np.eye(len(basis)), atol=1e-10)
    b2 = TruncationBasis(2, 6)
    cub2 = gaussian_cubature(40, 2)
    p2 = psi_matrix(b2, cub2.points)
    np.testing.assert_allclose((p2 * cub2.weights) @ p2.T, np.eye(len(b2)), atol=1e-10)


@given(st.integers(1, 4), st.integers(0, 12))
def test_basis_size_and_bijection(n, N):
    b = TruncationBasis(n, N)
    assert len(b) == math.comb(N + n, n)
    for k in range(len(b)):
        assert b.index_of(b.multi_index_of(k)) == k
    deg = b.degrees
    assert np.all(np.diff(deg) >= 0)
    for d in range(N + 1):
        block = [b.indices[k] for k in np.flatnonzero(deg == d)]
        assert block == sorted(block, reverse=True)


def test_basis_rejects_bad_input():
    with pytest.raises(ParameterError):
        TruncationBasis(0, 3)
    with pytest.raises(ParameterError):
        TruncationBasis(1, 3).index_of((4,))


def test_fock_eval_examples():
    b = TruncationBasis(1, 30)
    assert fock_eval(FockVector.unit(b, (0,)), [0.3 + 2j]) == 1
    c = np.array([1 / math.sqrt(math.factorial(k)) for k in range(31)])
    assert fock_eval(FockVector(b, c), [1.0]) == pytest.approx(math.e, rel=1e-15)


def test_pointwise_bound(rng):
    b = TruncationBasis(2, 10)
    for _ in range(20):
        F = FockVector(b, rng.standard_normal(len(b)) + 1j * rng.standard_normal(len(b)))
        z = rng.standard_normal(2) * 2 + 1j * rng.standard_normal(2) * 2
        assert abs(fock_eval(F, z)) <= math.exp(np.sum(np.abs(z) ** 2) / 2) * F.norm() * (1 + 1e-12)


def test_overflow_guard():
    F = FockVector.unit(TruncationBasis(1, 3), (1,))
    with pytest.raises(EvaluationError):
        fock_eval(F, [30.0])


def test_reproducing_kernel():
    assert reproducing_kernel([0], [0]) == 1
    assert reproducing_kernel([1.0], [1.0]) == pytest.approx(2.718281828459045, rel=1e-15)
    z, w = np.array([0.3 - 0.2j, 1.1j]), np.array([-0.5 + 0.4j, 0.7])
    assert reproducing_kernel(z, w) == pytest.approx(np.conj(reproducing_kernel(w, z)), rel=1e-15)
    # ||K(z, .)||^2 = e^{|z|^2} through the measure
    z0 = 0.6 - 0.3j
    val = integrate_fock_measure(lambda u: np.abs(np.exp(z0 * np.conj(u[:, 0]))) ** 2, gauss_hermite(60), 1)
    assert val.real == pytest.approx(math.exp(abs(z0) ** 2), rel=1e-10)


def test_weyl_examples(rng):
    b = TruncationBasis(1, 12)
    one = FockVector.unit(b, (0,))
    assert weyl_apply(one, [1.0], [0.0]) == pytest.approx(0.6065306597126334, rel=1e-15)
    F = FockVector(b, rng.standard_normal(len(b)) + 1j * rng.standard_normal(len(b)))
    z = np.array([0.2 + 0.5j])
    assert weyl_apply(F, [0.0], z) == fock_eval(F, z)


def test_weyl_isometry(rng):
    b = TruncationBasis(1, 8)
    F = FockVector(b, rng.standard_normal(len(b)) + 1j * rng.standard_normal(len(b)))
    val = integrate_fock_measure(lambda z: np.abs(weyl_apply(F, [0.7], z)) ** 2, gauss_hermite(60), 1).real
    assert val == pytest.approx(F.norm() ** 2, rel=1e-6)


def test_parseval(rng):
    b = TruncationBasis(1, 12)
    F = FockVector(b, rng.standard_normal(len(b)) + 1j * rng.standard_normal(len(b)))
    val = integrate_fock_measure(lambda z: np.abs(fock_eval(F, z)) ** 2, gauss_hermite(60), 1).real
    assert val == pytest.approx(F.norm() ** 2, rel=1e-6)


@given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=6, max_size=6))
def test_fock_vector_json_roundtrip(pairs):
    b = TruncationBasis(2, 2)
    F = FockVector(b, [complex(a, c) for a, c in pairs])
    G = FockVector.from_json(F.to_json())
    assert G.basis == F.basis
    assert np.array_equal(G.coeffs, F.coeffs)


def test_fock_vector_validation():
    b = TruncationBasis(1, 2)
    with pytest.raises(ParameterError):
        FockVector(b, [1, 2])
    with pytest.raises(ParameterError):
        FockVector(b, [1, np.nan, 0])
    with pytest.raises(ParameterError):
        FockVector.from_dict({"n": 1, "coeffs": []})


def test_hermite_vector_norm_and_eval():
    b = TruncationBasis(1, 3)
    f = HermiteVector(b, [0, 1, 0, 0])
    assert f.norm() == 1.0
    assert f(np.array([0.4])) == pytest.approx(psi_eval((1,), 0.4), rel=1e-15)
