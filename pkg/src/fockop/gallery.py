"""Named operators: closed-form symbols and identity checks.

Every check is reported as ``{id, value, reference, tolerance, pass}``.  The
comparison is ``|value - reference| <= tolerance`` unless the check carries a
``relation`` of ``"le"`` (``value <= tolerance``) or ``"ge"``
(``value >= tolerance``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .hermite import FockVector, TruncationBasis, fock_eval, weyl_apply
from .multiplier import Multiplier, named_multiplier
from .operator import apply, build_matrix, compose, operator_norm
from .symbol import Symbol, symbol_coeffs, symbol_point

A_MAX_ABS = 12.0
SERIES_RADIUS = 3.5
SQRT_PI = math.sqrt(math.pi)


def _series_A(z):
    # extended precision: near the imaginary axis the terms reach ~1e4 while A stays O(1)
    z = np.asarray(z, dtype=np.clongdouble)
    z2 = z * z
    term = z.copy()
    total = z.copy()
    for k in range(1, 400):
        term = term * z2 / k
        total = total + term / (2 * k + 1)
        if np.all(np.abs(term) <= 1e-20 * np.maximum(1.0, np.abs(total))):
            break
    return total.astype(complex)


def _segment_A(z):
    """``A(z) = z int_0^1 exp(z^2 t^2) dt`` by composite Gauss-Legendre."""
    z = complex(z)
    panels = max(8, int(math.ceil(abs(z) ** 2 / 3)))
    t, w = np.polynomial.legendre.leggauss(20)
    edges = np.linspace(0.0, 1.0, panels + 1)
    total = 0j
    for a, b in zip(edges[:-1], edges[1:]):
        u = 0.5 * (b - a) * t + 0.5 * (a + b)
        total += 0.5 * (b - a) * np.sum(w * np.exp(z * z * u * u))
    return z * total


def antiderivative_A(z):
    """``A(z) = int_0^z exp(u^2) du`` for ``|z| <= 12`` (scalar or array)."""
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > A_MAX_ABS):
        raise ParameterError(f"antiderivative_A is defined here for |z| <= {A_MAX_ABS}")
    flat = arr.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    near = np.abs(flat) <= SERIES_RADIUS
    if np.any(near):
        out[near] = _series_A(flat[near])
    for k in np.flatnonzero(~near):
        out[k] = _segment_A(flat[k])
    return complex(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def hilbert_symbol(z):
    """Symbol of the Hilbert transform, ``(2/sqrt(pi)) A(z/sqrt 2)``."""
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) > A_MAX_ABS * math.sqrt(2)):
        raise ParameterError("hilbert_symbol needs |z| <= 12 sqrt(2)")
    return (2 / SQRT_PI) * antiderivative_A(arr / math.sqrt(2))


def _first_coordinate(rule):
    def f(z):
        z = np.asarray(z, dtype=complex)
        return rule(z.reshape(z.shape[0], -1)[:, 0] if z.ndim > 1 else z)
    return f


def closed_symbol(name: str, **params) -> Symbol:
    """Closed-form symbol of a named example as a :class:`Symbol`."""
    name = str(name).lower()
    if name == "identity":
        n = int(params.get("n", 1))
        rule = lambda z: np.ones(np.asarray(z).reshape(-1, n).shape[0], dtype=complex)
        return Symbol(n, None, rule, "closed_form", {"closed_form": name, "params": {"n": n}})
    if name == "zero":
        n = int(params.get("n", 1))
        rule = lambda z: np.zeros(np.asarray(z).reshape(-1, n).shape[0], dtype=complex)
        return Symbol(n, None, rule, "closed_form", {"closed_form": name, "params": {"n": n}})
    if name == "hilbert":
        return Symbol(1, None, _first_coordinate(hilbert_symbol), "closed_form",
                      {"closed_form": name, "params": {}})
    if name == "gaussian":
        a = _gaussian_a(params.get("a", 0.25))
        c = math.sqrt(1 - 2 * a)
        return Symbol(1, None, _first_coordinate(lambda z: c * np.exp(a * z * z)), "closed_form",
                      {"closed_form": name, "params": {"a": a}})
    if name == "modulation":
        a = float(params.get("a", 0.0))
        return Symbol(1, None, _first_coordinate(lambda z: np.exp(a * z)), "closed_form",
                      {"closed_form": name, "params": {"a": a}})
    raise ParameterError(f"no closed form for {name!r}")


def _gaussian_a(a):
    a = float(a)
    if not 0 < a < 0.5:
        raise ParameterError(f"gaussian pair needs 0 < a < 1/2, got {a}")
    return a


@dataclass
class Check:
    id: str
    value: float
    reference: float
    tolerance: float
    relation: str = "abs"

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        if self.relation == "le":
            return bool(self.value <= self.tolerance)
        if self.relation == "ge":
            return bool(self.value >= self.tolerance)
        return bool(abs(self.value - self.reference) <= self.tolerance)

    def to_dict(self):
        d = {"id": self.id, "value": float(self.value), "reference": float(self.reference),
             "tolerance": float(self.tolerance), "pass": bool(self.passed)}
        if self.relation != "abs":
            d["relation"] = self.relation
        return d


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)
    N: int | None = None
    order: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, id_) -> Check:
        for c in self.checks:
            if c.id == id_:
                return c
        raise KeyError(id_)

    def to_dict(self):
        d = {"name": self.name, "N": self.N, "order": self.order,
             "checks": [c.to_dict() for c in self.checks]}
        if self.extra:
            d["extra"] = self.extra
        return d

    def to_json(self):
        return json.dumps(self.to_dict())


@dataclass
class NamedOperator:
    name: str
    multiplier: Multiplier
    closed_symbol: Symbol | None = None
    identities: list = field(default_factory=list)

    def symbol_check(self, samples: int = 20, radius: float = 2.0, seed: int = 0, tol: float = 1e-7) -> Check:
        """Largest gap between the closed form and direct synthesis at random ``|z| <= radius``."""
        if self.closed_symbol is None:
            raise ParameterError(f"{self.name} has no closed-form symbol")
        n = self.multiplier.n
        rng = np.random.default_rng(seed)
        z = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
        z *= (radius * rng.uniform(0, 1, (samples, 1)) ** (1 / (2 * n))) / np.linalg.norm(z, axis=1, keepdims=True)
        got = symbol_point(self.multiplier, z)
        ref = self.closed_symbol(z)
        return Check("closed_symbol", float(np.max(np.abs(got - ref))), 0.0, tol, "le")


def identity_pair(n: int = 1) -> NamedOperator:
    return NamedOperator("identity", named_multiplier("identity", n=n), closed_symbol("identity", n=n),
                         ["closed_symbol", "matrix_is_identity"])


def hilbert_pair() -> NamedOperator:
    return NamedOperator("hilbert", named_multiplier("hilbert"), closed_symbol("hilbert"),
                         ["closed_symbol", "phi_at_zero", "phi_prime_at_zero", "anti_self_adjoint"])


def gaussian_pair(a: float = 0.25) -> NamedOperator:
    a = _gaussian_a(a)
    return NamedOperator("gaussian", named_multiplier("gaussian", a=a), closed_symbol("gaussian", a=a),
                         ["closed_symbol", "phi_at_zero"])


def modulation_pair(a: float = 0.0) -> NamedOperator:
    a = float(a)
    return NamedOperator("modulation", named_multiplier("modulation", a=a), closed_symbol("modulation", a=a),
                         ["closed_symbol", "weyl_action", "norm"])


def _block_size(basis, max_degree=None):
    return len(basis.block(basis.N // 2 if max_degree is None else max_degree))


def hilbert_checks(N: int = 64, h: float = 1e-5) -> Report:
    op = hilbert_pair()
    S = build_matrix(op.multiplier, TruncationBasis(1, N))
    dphi = (hilbert_symbol(h) - hilbert_symbol(-h)) / (2 * h)
    checks = [
        op.symbol_check(),
        Check("phi_at_zero", abs(hilbert_symbol(0.0)), 0.0, 0.0),
        Check("phi_prime_at_zero", float(np.real(dphi)), math.sqrt(2 / math.pi), 1e-6),
        Check("anti_self_adjoint", float(np.max(np.abs(S.entries + S.entries.conj().T))), 0.0, 1e-12, "le"),
    ]
    return Report("hilbert", checks, N, S.order)


def identity_checks(n: int = 1, N: int = 16) -> Report:
    op = identity_pair(n)
    S = build_matrix(op.multiplier, TruncationBasis(n, N))
    dev = float(np.max(np.abs(S.entries - np.eye(len(S.basis)))))
    return Report("identity", [op.symbol_check(), Check("matrix_is_identity", dev, 0.0, 1e-12, "le")], N, S.order)


def gaussian_checks(a: float = 0.25, N: int = 32) -> Report:
    op = gaussian_pair(a)
    S = build_matrix(op.multiplier, TruncationBasis(1, N))
    phi0 = symbol_point(op.multiplier, 0.0)
    checks = [op.symbol_check(), Check("phi_at_zero", float(abs(phi0)), math.sqrt(1 - 2 * a), 1e-10)]
    return Report("gaussian", checks, N, S.order, {"a": a})


def modulation_checks(a: float = 0.5, N: int = 48, seed: int = 0) -> Report:
    """Closed form, the Weyl action on low-degree inputs, and the norm ``e^{a^2/2}``.

    With ``m = e^{a^2/2} e^{-2iax}`` the symbol is exactly ``e^{za}`` and
    ``S F(z) = e^{za} F(z - a) = e^{a^2/2} W_a F(z)``; the unitary part
    ``e^{-a^2/2} S`` is the Weyl operator itself.
    """
    op = modulation_pair(a)
    basis = TruncationBasis(1, N)
    S = build_matrix(op.multiplier, basis)
    c0 = math.exp(a * a / 2)
    rng = np.random.default_rng(seed)
    low = len(basis.block(N // 4))
    c = np.zeros(len(basis), dtype=complex)
    c[:low] = rng.standard_normal(low) + 1j * rng.standard_normal(low)
    F = FockVector(basis, c / np.linalg.norm(c))
    z = 0.5 * (rng.standard_normal(8) + 1j * rng.standard_normal(8))
    got = fock_eval(apply(S, F), z[:, None]) / c0
    ref = weyl_apply(F, [a], z[:, None])
    one = FockVector.unit(basis, (0,))
    at0 = complex(fock_eval(apply(S, one), np.zeros(1))) / c0
    checks = [
        op.symbol_check(),
        Check("weyl_action", float(np.max(np.abs(got - ref))), 0.0, 1e-6, "le"),
        Check("unitary_part_constant_at_zero", float(abs(at0)), math.exp(-a * a / 2), 1e-8),
        Check("norm_over_c0", operator_norm(S) / c0, 1.0, 5e-2),
    ]
    return Report("modulation", checks, N, S.order, {"a": a, "c0": c0})


def riesz_suite(n: int = 2, N: int = 24, order: int | None = None, z=None) -> Report:
    """Riesz identities on the truncation: sum of squares, symbol norms, and the action on symbols."""
    if n < 2:
        raise ParameterError("Riesz transforms need n >= 2")
    if n > 3:
        raise ParameterError("riesz_suite is capped at n <= 3 (matrix size grows like N^n)")
    basis = TruncationBasis(n, N)
    ms = [named_multiplier("riesz", j=j, n=n) for j in range(1, n + 1)]
    Ss = [build_matrix(m, basis, order=order) for m in ms]
    cs = [symbol_coeffs(m, basis, order=order) for m in ms]
    k = _block_size(basis)
    total = sum(S.entries @ S.entries for S in Ss) + np.eye(len(basis))
    z = np.zeros((1, n)) if z is None else np.asarray(z, dtype=complex).reshape(-1, n)
    act = sum(fock_eval(apply(S, c), z) for S, c in zip(Ss, cs)) + 1.0
    checks = [
        Check("sum_symbol_norms", float(sum(c.norm() ** 2 for c in cs)), 1.0, 1e-3),
        Check("sum_squares_plus_identity", operator_norm(total[:k, :k]), 0.0, 5e-3, "le"),
        Check("sum_apply_plus_one", float(np.max(np.abs(act))), 0.0, 1e-3, "le"),
    ]
    return Report("riesz", checks, N, Ss[0].order, {"n": n})


def _beurling_defect(k, N, order=None):
    basis = TruncationBasis(2, N)
    S = build_matrix(named_multiplier("beurling", k=k), basis, order=order)
    b = _block_size(basis)
    A = S.entries
    return S, operator_norm((A.conj().T @ A - np.eye(len(basis)))[:b, :b])


def beurling_suite(k: int = 1, N: int = 20, order: int | None = None, refine: int | None = 8) -> Report:
    """Isometry defect of the k-th Beurling power, its refinement trend, and the power law."""
    if not 1 <= k <= 4:
        raise ParameterError("beurling_suite supports 1 <= k <= 4")
    S, defect = _beurling_defect(k, N, order)
    checks = [Check("isometry_defect", defect, 0.0, 1e-2, "le")]
    extra = {"k": k, "defects": {str(N): defect}}
    if refine:
        _, finer = _beurling_defect(k, N + refine, order)
        extra["defects"][str(N + refine)] = finer
        checks.append(Check("isometry_refinement_change", finer - defect, 0.0, 0.0, "le"))
    p = max(k, 2)
    S1 = S if k == 1 else build_matrix(named_multiplier("beurling", k=1), S.basis, order=order)
    Sp = build_matrix(named_multiplier("beurling", k=p), S.basis, order=order)
    prod = S1
    for _ in range(p - 1):
        prod = compose(prod, S1)
    b = _block_size(S.basis)
    checks.append(Check("power_composition", operator_norm((prod.entries - Sp.entries)[:b, :b]), 0.0, 1e-2, "le"))
    m1 = named_multiplier("beurling", k=1)
    checks.append(Check("multiplier_at_e1", abs(m1(np.array([1.0, 0.0])) - 1.0), 0.0, 1e-15, "le"))
    return Report("beurling", checks, N, S.order, extra)


def counterexample_suite(Ns=(16, 64, 256), t_max: float = 5.0, samples: int = 101) -> Report:
    """Unbounded L^4 multiplier: bounded symbol on iR, yet truncated norms keep growing."""
    Ns = sorted(int(N) for N in Ns)
    m = named_multiplier("counterexample")
    t = np.linspace(-t_max, t_max, samples)
    phi_it = symbol_point(m, 1j * t)
    sup_it = float(np.max(np.abs(phi_it)))
    norms = [operator_norm(build_matrix(m, TruncationBasis(1, N))) for N in Ns]
    h = named_multiplier("hilbert")
    hn = [operator_norm(build_matrix(h, TruncationBasis(1, N))) for N in (Ns[0], Ns[-1])]
    steps = np.diff(norms)
    checks = [
        Check("sup_phi_imaginary_axis_finite", sup_it, 0.0, np.finfo(float).max, "le"),
        Check("norm_strictly_increasing", float(steps.min()) if steps.size else 0.0, 0.0,
              np.nextafter(0.0, 1.0), "ge"),
        Check("norm_growth", norms[-1] / norms[0], 1.2, 1.2, "ge"),
        Check("hilbert_plateau", hn[1] / hn[0], 1.0, 1.02, "le"),
    ]
    extra = {"Ns": Ns, "norms": norms, "hilbert_norms": hn, "phi_at_0": abs(complex(phi_it[samples // 2]))}
    return Report("counterexample", checks, Ns[-1], None, extra)


GALLERY = {
    "identity": identity_checks,
    "hilbert": hilbert_checks,
    "gaussian": gaussian_checks,
    "modulation": modulation_checks,
    "riesz": riesz_suite,
    "beurling": beurling_suite,
    "counterexample": counterexample_suite,
}


def run_gallery(name: str, **params) -> Report:
    try:
        fn = GALLERY[name]
    except KeyError:
        raise ParameterError(f"unknown gallery entry {name!r}; known: {', '.join(GALLERY)}") from None
    return fn(**params)
