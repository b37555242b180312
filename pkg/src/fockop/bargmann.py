"""Bargmann transform, its inverse, and the Fourier transform in the Hermite basis.

Production code works on coefficient arrays: ``B psi_alpha = e_alpha`` makes
the transform the identity on coefficients, and the Fourier transform

    F f(x) = pi^{-n/2} int exp(-2i x.y) f(y) dy

is diagonal with eigenvalue ``(-i)^{|alpha|}``.  The pointwise integral forms
below exist to check those two facts.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError
from .hermite import FockVector, HermiteVector, TruncationBasis, fock_eval, psi_matrix
from .quad import QuadratureRule, gauss_hermite, integrate_fock_measure, tensor_nodes


def _as_callable(f, n):
    if isinstance(f, HermiteVector):
        return lambda x: f(x)
    return f


def bargmann_point(f, z, rule: QuadratureRule | None = None, n: int | None = None) -> complex:
    """``Bf(z) = (2/pi)^{n/4} int f(x) exp(2x.z - x^2 - z^2/2) dx`` by Gauss-Hermite.

    ``f`` is a :class:`HermiteVector` or a vectorised callable on ``(K, n)``
    real points (then ``n`` must be given unless ``z`` fixes it).
    """
    rule = rule or gauss_hermite(200)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if isinstance(f, HermiteVector):
        n = f.basis.n
    n = n or z.shape[0]
    if z.shape[0] != n:
        raise ParameterError("point dimension mismatch")
    g = _as_callable(f, n)
    pts, w = tensor_nodes(rule, n)
    vals = np.asarray(g(pts), dtype=complex) * np.exp(2.0 * pts @ z - 0.5 * np.sum(z * z))
    return complex((2 / math.pi) ** (n / 4) * np.sum(w * vals))


def bargmann_basis(f: HermiteVector) -> FockVector:
    """Coefficient form of ``B``: identical coefficients on the shared basis."""
    if not isinstance(f, HermiteVector):
        raise ParameterError("bargmann_basis expects a HermiteVector")
    return FockVector(f.basis, f.coeffs.copy())


def inverse_bargmann_basis(F: FockVector) -> HermiteVector:
    if not isinstance(F, FockVector):
        raise ParameterError("inverse_bargmann_basis expects a FockVector")
    return HermiteVector(F.basis, F.coeffs.copy())


def inverse_bargmann_point(F, x, rule: QuadratureRule | None = None) -> complex:
    """``B^{-1}F(x) = (2/pi)^{n/4} int F(z) exp(2x.conj(z) - x^2 - conj(z)^2/2) dlambda(z)``."""
    rule = rule or gauss_hermite(60)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = F.n if isinstance(F, FockVector) else x.shape[0]
    if x.shape[0] != n:
        raise ParameterError("point dimension mismatch")
    Fz = (lambda z: fock_eval(F, z)) if isinstance(F, FockVector) else F

    def integrand(z):
        zb = np.conj(z)
        return Fz(z) * np.exp(2.0 * zb @ x - x @ x - 0.5 * np.sum(zb * zb, axis=1))

    return (2 / math.pi) ** (n / 4) * integrate_fock_measure(integrand, rule, n)


def fourier_phase(basis: TruncationBasis, inverse: bool = False) -> np.ndarray:
    """Diagonal of the Fourier transform in the ``psi`` basis: ``(-i)^{|alpha|}``."""
    base = 1j if inverse else -1j
    return base ** (basis.degrees % 4)


def fourier_diagonal(f: HermiteVector) -> HermiteVector:
    return HermiteVector(f.basis, f.coeffs * fourier_phase(f.basis))


def inverse_fourier_diagonal(f: HermiteVector) -> HermiteVector:
    return HermiteVector(f.basis, f.coeffs * fourier_phase(f.basis, inverse=True))


def rotate_fock(F: FockVector, clockwise: bool = True) -> FockVector:
    """Coefficients of ``z -> F(-iz)`` (or ``F(iz)`` with ``clockwise=False``)."""
    return FockVector(F.basis, F.coeffs * fourier_phase(F.basis, inverse=not clockwise))


def fourier_point(f, x, rule: QuadratureRule | None = None, n: int = 1) -> complex:
    """``pi^{-n/2} int exp(-2i x.y) f(y) dy`` by Gauss-Hermite, ``f`` Gaussian-decaying.

    Uses the rule for weight ``exp(-2y^2)`` and divides the weight back out,
    which is exact when ``f`` is a Hermite function.
    """
    rule = rule or gauss_hermite(200)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    g = _as_callable(f, n)
    pts, _ = tensor_nodes(rule, n)
    y = pts / math.sqrt(2.0)
    sw = np.prod(rule.scaled_weights[_tensor_index(rule.order, n)], axis=1) / 2 ** (n / 2)
    vals = np.asarray(g(y), dtype=complex) * np.exp(-2j * y @ x)
    return complex(np.sum(sw * vals) / math.pi ** (n / 2))


def _tensor_index(order, n):
    import itertools
    return np.array(list(itertools.product(range(order), repeat=n)), dtype=int)


def fourier_eigenvalues(kmax: int = 8, rule: QuadratureRule | None = None, samples=(0.0, 0.37, 0.81, 1.3)):
    """Measured eigenvalue of the Fourier transform on ``psi_k``, ``k = 0..kmax``.

    For each k the ratio ``F psi_k (x) / psi_k(x)`` is estimated by least
    squares over the sample points (points where ``psi_k`` vanishes drop out).
    """
    rule = rule or gauss_hermite(200)
    basis = TruncationBasis(1, kmax)
    xs = np.asarray(samples, dtype=float)
    psi = psi_matrix(basis, xs[:, None])
    out = []
    for k in range(kmax + 1):
        fk = lambda y, k=k: psi_matrix(TruncationBasis(1, k), y)[k]
        Fk = np.array([fourier_point(fk, x, rule) for x in xs])
        p = psi[k]
        out.append(complex(np.vdot(p, Fk) / np.vdot(p, p)))
    return np.array(out)
