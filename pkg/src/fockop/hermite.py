"""Hermite functions on R^n, the monomial basis of the Fock space, and truncated vectors.

The L^2 family used throughout is

    psi_k(x) = (2/pi)^{1/4} (2^k k!)^{-1/2} H_k(sqrt(2) x) exp(-x^2),

normalised so that the Bargmann transform sends ``psi_alpha`` to the Fock
monomial ``e_alpha(z) = z^alpha / sqrt(alpha!)``.  In one variable
``psi_k(x) = 2^{1/4} h_k(sqrt(2) x)`` with ``h_k`` the usual Hermite functions.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from .errors import EvaluationError, ParameterError
from .quad import hermite_function_table

OVERFLOW_LIMIT = 700.0


class TruncationBasis:
    """Multi-indices ``alpha`` in ``n`` variables with ``|alpha| <= N``.

    Ordered by total degree, and within a degree in decreasing lexicographic
    order, so ``(1, 0)`` precedes ``(0, 1)``.
    """

    def __init__(self, n: int, N: int):
        if int(n) < 1 or int(N) < 0:
            raise ParameterError(f"need n >= 1 and N >= 0, got n={n}, N={N}")
        self.n = int(n)
        self.N = int(N)
        idx = []
        for d in range(self.N + 1):
            idx.extend(_compositions(d, self.n))
        self.indices = tuple(idx)
        self._lookup = {a: k for k, a in enumerate(self.indices)}

    def __len__(self):
        return len(self.indices)

    @property
    def size(self) -> int:
        return len(self.indices)

    def __eq__(self, other):
        return isinstance(other, TruncationBasis) and (self.n, self.N) == (other.n, other.N)

    def __hash__(self):
        return hash((self.n, self.N))

    def __repr__(self):
        return f"TruncationBasis(n={self.n}, N={self.N})"

    def index_of(self, alpha) -> int:
        try:
            return self._lookup[tuple(int(a) for a in alpha)]
        except KeyError:
            raise ParameterError(f"multi-index {alpha!r} not in {self!r}") from None

    def multi_index_of(self, k: int) -> tuple:
        return self.indices[k]

    @cached_property
    def index_array(self) -> np.ndarray:
        return np.array(self.indices, dtype=int).reshape(len(self.indices), self.n)

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.index_array.sum(axis=1)

    def block(self, max_degree: int) -> np.ndarray:
        """Positions of the indices with ``|alpha| <= max_degree`` (a leading slice)."""
        return np.flatnonzero(self.degrees <= max_degree)

    @staticmethod
    def expected_size(n, N):
        return comb(N + n, n)


def _compositions(d, n):
    """All ``n``-tuples of nonnegative ints summing to ``d``, lexicographically descending."""
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            out.append((first,) + rest)
    return out


def psi_table(kmax, x):
    """``psi_0..psi_kmax`` at the real points ``x``; shape ``(kmax + 1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    return 2.0 ** 0.25 * hermite_function_table(kmax, math.sqrt(2.0) * x)


def psi_matrix(basis: TruncationBasis, points) -> np.ndarray:
    """Values ``psi_alpha(x_k)`` as an array of shape ``(len(basis), K)``.

    ``points`` has shape ``(K, n)``.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, basis.n)
    idx = basis.index_array
    out = np.ones((len(basis), pts.shape[0]))
    for j in range(basis.n):
        tab = psi_table(basis.N, pts[:, j])
        out *= tab[idx[:, j]]
    return out


def psi_eval(alpha, x) -> float:
    """``psi_alpha(x)`` for a single multi-index and point."""
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if len(alpha) != len(x):
        raise ParameterError("multi-index and point dimensions differ")
    if not np.all(np.isfinite(x)):
        raise EvaluationError("non-finite point", point=x)
    val = 1.0
    for a, xj in zip(alpha, x):
        val *= psi_table(a, xj)[a]
    return float(val)


def monomial_matrix(basis: TruncationBasis, z) -> np.ndarray:
    """Values ``e_alpha(z_k)`` as an array ``(len(basis), K)`` for complex points ``(K, n)``."""
    z = np.asarray(z, dtype=complex).reshape(-1, basis.n)
    sq = np.sum(np.abs(z) ** 2, axis=1)
    if np.any(sq > OVERFLOW_LIMIT):
        k = int(np.argmax(sq > OVERFLOW_LIMIT))
        raise EvaluationError(f"|z|^2 = {sq[k]:.1f} exceeds overflow guard {OVERFLOW_LIMIT}", point=z[k])
    idx = basis.index_array
    out = np.ones((len(basis), z.shape[0]), dtype=complex)
    for j in range(basis.n):
        tab = np.empty((basis.N + 1, z.shape[0]), dtype=complex)
        tab[0] = 1.0
        for k in range(1, basis.N + 1):
            tab[k] = tab[k - 1] * z[:, j] / math.sqrt(k)
        out *= tab[idx[:, j]]
    return out


@dataclass(frozen=True, eq=False)
class FockVector:
    """Truncated element ``sum_alpha c_alpha e_alpha`` of the Fock space."""

    basis: TruncationBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if c.shape[0] != len(self.basis):
            raise ParameterError(f"expected {len(self.basis)} coefficients, got {c.shape[0]}")
        if not np.all(np.isfinite(c)):
            raise ParameterError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self):
        return self.basis.n

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __call__(self, z):
        return fock_eval(self, z)

    def to_dict(self):
        return {"n": self.basis.n, "N": self.basis.N,
                "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        try:
            basis = TruncationBasis(int(d["n"]), int(d["N"]))
            coeffs = np.array([complex(re, im) for re, im in d["coeffs"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed Fock vector: {exc}") from exc
        return cls(basis, coeffs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    @classmethod
    def unit(cls, basis, alpha):
        c = np.zeros(len(basis), dtype=complex)
        c[basis.index_of(alpha)] = 1.0
        return cls(basis, c)


@dataclass(frozen=True, eq=False)
class HermiteVector:
    """Truncated element ``sum_alpha c_alpha psi_alpha`` of L^2(R^n)."""

    basis: TruncationBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if c.shape[0] != len(self.basis):
            raise ParameterError(f"expected {len(self.basis)} coefficients, got {c.shape[0]}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __call__(self, x):
        """Pointwise value at real points of shape ``(K, n)`` (or a single point)."""
        x = np.asarray(x, dtype=float)
        single = x.ndim <= 1
        vals = self.coeffs @ psi_matrix(self.basis, x.reshape(-1, self.basis.n))
        return complex(vals[0]) if single else vals


def fock_eval(F: FockVector, z):
    """Evaluate ``F(z)``; ``z`` is a point of C^n or an array ``(K, n)`` of points."""
    z = np.asarray(z, dtype=complex)
    single = z.ndim <= 1
    vals = F.coeffs @ monomial_matrix(F.basis, z.reshape(-1, F.basis.n))
    return complex(vals[0]) if single else vals


def reproducing_kernel(z, w) -> complex:
    """``K(z, conj w) = exp(z . conj(w))``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    return complex(np.exp(np.sum(z * np.conj(w))))


def weyl_apply(F: FockVector, a, z):
    """``(W_a F)(z) = F(z - a) exp(z.a - a.a/2)`` for a real shift ``a``."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if a.shape[0] != F.n:
        raise ParameterError("shift dimension differs from the vector's")
    z = np.asarray(z, dtype=complex)
    single = z.ndim <= 1
    zz = z.reshape(-1, F.n)
    vals = fock_eval(F, zz - a) * np.exp(zz @ a - 0.5 * float(a @ a))
    return complex(vals[0]) if single else vals
