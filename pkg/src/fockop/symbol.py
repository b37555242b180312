"""Entire symbols: synthesis from a multiplier and recovery of the multiplier.

Synthesis evaluates

    phi(z) = (2/pi)^{n/2} int m(x) exp(-2 (x - i z/2)^2) dx
           = (2/pi)^{n/2} exp(z.z/2) int m(x) exp(-2 x^2) exp(2i x.z) dx,

the second form keeping every quadrature node on the real axis.  In the
monomial basis the same symbol has coefficients
``c_alpha = i^{|alpha|} int m psi_0 psi_alpha dx``, and inverting that relation
gives the multiplier back.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EvaluationError, ParameterError
from .hermite import FockVector, TruncationBasis, fock_eval, psi_matrix, psi_table
from .multiplier import Multiplier, cubature_for
from .operator import CHUNK_ENTRIES
from .quad import Cubature, gauss_hermite, tensor_nodes

EXP_LIMIT = 700.0
PSI0_FLOOR = 1e-6
LITERAL_MAX_ORDER = 40


@dataclass(frozen=True, eq=False)
class Symbol:
    """An entire function on C^n, held as coefficients, as a pointwise rule, or both."""

    n: int
    coeffs: FockVector | None = None
    rule: object = None
    provenance: str = "external"
    closed_form: dict | None = None

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        single = z.ndim <= 1 and (self.n > 1 or z.ndim == 0)
        pts = z.reshape(-1, self.n)
        if self.rule is not None:
            vals = np.asarray(self.rule(pts), dtype=complex).reshape(-1)
        elif self.coeffs is not None:
            vals = fock_eval(self.coeffs, pts)
        else:
            raise ParameterError("symbol has neither coefficients nor a pointwise rule")
        return complex(vals[0]) if single else vals

    def norm(self) -> float:
        if self.coeffs is None:
            raise ParameterError("norm needs the coefficient representation")
        return self.coeffs.norm()

    def to_dict(self):
        if self.coeffs is not None:
            return self.coeffs.to_dict()
        if self.closed_form is not None:
            return dict(self.closed_form)
        raise ParameterError("symbol has no serialisable form")

    def to_json(self):
        return json.dumps(self.to_dict())


def _cubature(m, N, cubature, order):
    if cubature is not None:
        return cubature
    return cubature_for(m, N, order)


def symbol_point(m: Multiplier, z, cubature: Cubature | None = None, order: int | None = None):
    """``phi(z)`` for one point of C^n (or an array ``(K, n)`` of points)."""
    z = np.asarray(z, dtype=complex)
    single = z.ndim <= 1 and (m.n > 1 or z.ndim == 0)
    zz = z.reshape(-1, m.n)
    cub = _cubature(m, 32, cubature, order)
    x = cub.points
    mv = m.values(x) * cub.weights * np.exp(-2.0 * np.sum(x * x, axis=1))
    pref = 0.5 * np.sum(zz * zz, axis=1)
    if np.any(np.abs(pref.real) > EXP_LIMIT):
        k = int(np.argmax(np.abs(pref.real) > EXP_LIMIT))
        raise EvaluationError("exp(z.z/2) would overflow", point=zz[k])
    vals = np.exp(2j * zz @ x.T) @ mv
    vals = (2 / math.pi) ** (m.n / 2) * np.exp(pref) * vals
    return complex(vals[0]) if single else vals


def symbol_coeffs(m: Multiplier, basis: TruncationBasis, cubature: Cubature | None = None,
                  order: int | None = None) -> FockVector:
    """Coefficients ``c_alpha = i^{|alpha|} int m(x) psi_0(x) psi_alpha(x) dx``."""
    if basis.n != m.n:
        raise ParameterError(f"basis dimension {basis.n} != multiplier dimension {m.n}")
    cub = _cubature(m, basis.N, cubature, order)
    g = np.zeros(len(basis), dtype=complex)
    step = max(256, CHUNK_ENTRIES // len(basis))
    for k in range(0, cub.size, step):
        pts = cub.points[k:k + step]
        psi = psi_matrix(basis, pts)
        g += psi @ (cub.weights[k:k + step] * m.values(pts) * psi[0])
    return FockVector(basis, (1j ** (basis.degrees % 4)) * g)


def symbol_from_multiplier(m: Multiplier, basis: TruncationBasis, **kw) -> Symbol:
    coeffs = symbol_coeffs(m, basis, **kw)
    cub = cubature_for(m, max(basis.N, 32))
    return Symbol(m.n, coeffs, lambda z: symbol_point(m, z, cubature=cub), "from_multiplier")


def multiplier_from_symbol_coeffs(phi: FockVector, x):
    """Recover ``m(x) = psi_0(x)^{-1} sum_alpha (-i)^{|alpha|} c_alpha psi_alpha(x)``.

    Raises :class:`DomainError` where ``psi_0(x) < 1e-6`` (roughly ``|x| > 3.6``
    in one variable), since the division amplifies truncation error there.
    """
    basis = phi.basis
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1 and (basis.n > 1 or x.ndim == 0)
    pts = x.reshape(-1, basis.n)
    psi = psi_matrix(basis, pts)
    p0 = psi[0]
    if np.any(p0 < PSI0_FLOOR):
        k = int(np.argmin(p0))
        raise DomainError(f"psi_0(x) = {p0[k]:.3g} below {PSI0_FLOOR}; recovery unreliable", point=pts[k])
    c = phi.coeffs * ((-1j) ** (basis.degrees % 4))
    vals = (c @ psi) / p0
    return complex(vals[0]) if single else vals


def multiplier_from_symbol_integral(phi, x, order: int = 32, scale: float = 1.0) -> complex:
    """Literal double Fock-space integral for the multiplier (one variable only).

        m(x) = int int phi(z - conj w) exp(z conj(w) - 2i x conj(z) + conj(z)^2 / 2)
               dlambda(w) dlambda(z).

    ``phi`` is a vectorised rule on complex arrays (a :class:`Symbol` works).
    Both measures are integrated with tensor Gauss-Hermite rules of ``order``
    points per real axis; ``order`` is capped at 40 because the cost is
    ``order**4`` evaluations of ``phi``.
    """
    if order > LITERAL_MAX_ORDER:
        raise ParameterError(f"order {order} exceeds the cost guard {LITERAL_MAX_ORDER}")
    x = float(np.asarray(x, dtype=float).reshape(-1)[0])
    rule = gauss_hermite(order)
    pts, w = tensor_nodes(rule, 2)
    nodes = pts[:, 0] + 1j * pts[:, 1]
    weights = w / math.pi
    z = nodes[:, None]
    wb = np.conj(nodes)[None, :]
    arg = (z - wb).reshape(-1, 1)
    ph = np.asarray(phi(arg), dtype=complex).reshape(len(nodes), len(nodes))
    inner = (ph * np.exp(z * wb)) @ weights
    zb = np.conj(nodes)
    outer = inner * np.exp(-2j * x * zb + 0.5 * zb * zb)
    val = complex(np.sum(weights * outer))
    if not np.isfinite(val):
        raise EvaluationError("literal recovery integral is not finite", point=x)
    return val


def adjoint_symbol(m: Multiplier) -> Multiplier:
    """Multiplier of the adjoint operator: the complex conjugate of ``m``."""
    return m.conj()


def symbol_from_dict(d) -> Symbol:
    """Inverse of :meth:`Symbol.to_dict` (coefficient form or a gallery closed form)."""
    if "coeffs" in d:
        F = FockVector.from_dict(d)
        return Symbol(F.n, F, None, "external")
    if "closed_form" in d:
        from .gallery import closed_symbol
        return closed_symbol(d["closed_form"], **d.get("params", {}))
    raise ParameterError("symbol JSON needs 'coeffs' or 'closed_form'")
