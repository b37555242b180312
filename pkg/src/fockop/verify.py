"""Per-module invariant suites behind ``fock verify``.

Each suite returns a list of :class:`~fockop.gallery.Check`; sizes and
tolerances follow the module contracts and can be overridden through the
``tolerances`` mapping (keys are check ids).
"""
from __future__ import annotations

import math

import numpy as np

from . import bargmann as bg
from . import quad
from .gallery import Check, counterexample_suite, beurling_suite, gaussian_checks, hilbert_checks, \
    hilbert_symbol, identity_checks, modulation_checks, riesz_suite
from .hermite import FockVector, HermiteVector, TruncationBasis, fock_eval, psi_matrix
from .multiplier import GridSpec, essential_range, grid_multiplier, named_multiplier, sup_norm
from .operator import adjoint, apply, apply_direct_quadrature, block_distance, build_matrix, commutator_norm, \
    compose, operator_norm
from .spectral import cluster_fraction, hermitian_eigs, projection_defects, reducing_projection, \
    spectrum_estimate
from .symbol import Symbol, multiplier_from_symbol_coeffs, multiplier_from_symbol_integral, symbol_coeffs, \
    symbol_point


def _tol(tols, key, default):
    return float(tols.get(key, default)) if tols else default


def suite_quad(seed=0, tolerances=None, **_):
    t = tolerances or {}
    r1, r2, r20 = quad.gauss_hermite(1), quad.gauss_hermite(2), quad.gauss_hermite(20)
    big = quad.gauss_hermite(4096)
    moment = quad.integrate_weighted_Rn(lambda x: x[:, 0] ** 4, r20, 1, 1.0)
    return [
        Check("order1_weight", float(r1.weights[0]), math.sqrt(math.pi), _tol(t, "order1_weight", 1e-15)),
        Check("order2_node", float(r2.nodes[1]), math.sqrt(0.5), 1e-15),
        Check("t4_moment", float(moment.real), 0.75 * math.sqrt(math.pi), _tol(t, "t4_moment", 1e-12)),
        Check("weight_sum_4096", float(big.weights.sum()), math.sqrt(math.pi), 1e-12),
        Check("symmetry_4096", float(np.max(np.abs(big.nodes + big.nodes[::-1]))), 0.0, 1e-13, "le"),
        Check("gauss_b2", float(quad.integrate_weighted_Rn(lambda x: np.ones(len(x)), r20, 1, 2.0).real),
              math.sqrt(math.pi / 2), 1e-14),
        Check("fock_measure_one", float(quad.integrate_fock_measure(lambda z: np.ones(len(z)), r20, 1).real),
              1.0, 1e-12),
        Check("fock_kernel", abs(quad.integrate_fock_measure(
            lambda w: np.exp((0.3 + 0.1j) * np.conj(w[:, 0])), quad.gauss_hermite(40), 1) - 1.0), 0.0, 1e-12, "le"),
    ]


def suite_hermite_fock(seed=0, tolerances=None, **_):
    basis = TruncationBasis(1, 24)
    rule = quad.gaussian_cubature(200, 1)
    psi = psi_matrix(basis, rule.points)
    gram = (psi * rule.weights) @ psi.T
    b2 = TruncationBasis(2, 10)
    z = np.array([[0.4 - 0.2j]])
    kern = quad.integrate_fock_measure(
        lambda w: np.exp(z[0, 0] * np.conj(w[:, 0])) * np.exp(np.conj(z[0, 0]) * w[:, 0]), quad.gauss_hermite(60), 1)
    return [
        Check("basis_size_n2_N10", len(b2), math.comb(12, 2), 0.0),
        Check("psi_orthonormal", float(np.max(np.abs(gram - np.eye(len(basis))))), 0.0, 1e-12, "le"),
        Check("kernel_norm", abs(kern - math.exp(abs(z[0, 0]) ** 2)), 0.0, 1e-10, "le"),
    ]


def suite_bargmann(seed=0, tolerances=None, **_):
    rng = np.random.default_rng(seed)
    basis = TruncationBasis(1, 24)
    worst = 0.0
    rule = quad.gauss_hermite(200)
    for _ in range(20):
        c = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
        f = HermiteVector(basis, c / np.linalg.norm(c))
        F = bg.bargmann_basis(f)
        z = 0.8 * (rng.standard_normal() + 1j * rng.standard_normal())
        worst = max(worst, abs(bg.bargmann_point(f, [z], rule) - fock_eval(F, [z])) / max(1.0, abs(fock_eval(F, [z]))))
    small = TruncationBasis(1, 12)
    c = rng.standard_normal(len(small)) + 1j * rng.standard_normal(len(small))
    F = FockVector(small, c)
    zs = rng.standard_normal((20, 1)) + 1j * rng.standard_normal((20, 1))
    rot = float(np.max(np.abs(fock_eval(bg.rotate_fock(F), zs) - fock_eval(F, -1j * zs))))
    eig = bg.fourier_eigenvalues(8)
    eig_err = float(np.max(np.abs(eig - (-1j) ** np.arange(9))))
    return [
        Check("bargmann_quadrature", worst, 0.0, 1e-6, "le"),
        Check("fourier_rotation", rot, 0.0, 1e-10, "le"),
        Check("fourier_eigenvalues", eig_err, 0.0, 1e-8, "le"),
        Check("inverse_at_zero", abs(bg.inverse_bargmann_point(FockVector.unit(small, (0,)), [0.0])),
              (2 / math.pi) ** 0.25, 1e-10),
    ]


def suite_multiplier(seed=0, tolerances=None, **_):
    grid = GridSpec()
    hr = essential_range(named_multiplier("hilbert"), grid)
    return [
        Check("sup_sin", sup_norm(named_multiplier("sin"), grid), 1.0, 1e-5),
        Check("sup_modulation", sup_norm(named_multiplier("modulation", a=0.5), grid), math.exp(0.125), 1e-12),
        Check("hilbert_range_size", len(hr), 2, 0.0),
        Check("hilbert_range", float(np.max(np.abs(np.sort_complex(hr) - np.array([-1j, 1j])))), 0.0, 1e-15, "le"),
    ]


def suite_symbol(seed=0, tolerances=None, **_):
    m_sin = named_multiplier("sin")
    basis = TruncationBasis(1, 64)
    c = symbol_coeffs(m_sin, basis)
    x = np.linspace(-3, 3, 61)
    rt = float(np.max(np.abs(multiplier_from_symbol_coeffs(c, x[:, None]) - np.sin(x))))
    phi = Symbol(1, c)
    lit = max(abs(multiplier_from_symbol_integral(phi, xx, order=32) - multiplier_from_symbol_coeffs(c, xx))
              for xx in (-1.0, 0.3, 1.7))
    z = np.array([0.7 + 0.3j, -0.2 + 1.1j])
    agree = float(np.max(np.abs(fock_eval(symbol_coeffs(named_multiplier("hilbert"), TruncationBasis(1, 64)),
                                          z[:, None]) - symbol_point(named_multiplier("hilbert"), z))))
    return [
        Check("identity_symbol", abs(symbol_point(named_multiplier("identity"), 0.0) - 1), 0.0, 1e-14, "le"),
        Check("hilbert_phi_zero", abs(symbol_point(named_multiplier("hilbert"), 0.0)), 0.0, 1e-14, "le"),
        Check("gaussian_phi_zero", abs(symbol_point(named_multiplier("gaussian", a=0.25), 0.0)),
              math.sqrt(0.5), 1e-12),
        Check("coefficient_vs_point", agree, 0.0, 1e-8, "le"),
        Check("sin_roundtrip", rt, 0.0, 1e-6, "le"),
        Check("literal_vs_coefficient", float(lit), 0.0, 1e-3, "le"),
    ]


def _oracle_gap(m, N=32, points=4, seed=0):
    rng = np.random.default_rng(seed)
    basis = TruncationBasis(1, N)
    S = build_matrix(m, basis)
    c = np.zeros(len(basis), dtype=complex)
    low = len(basis.block(N // 2))
    c[:low] = rng.standard_normal(low) + 1j * rng.standard_normal(low)
    F = FockVector(basis, c / np.linalg.norm(c))
    SF = apply(S, F)
    phi = Symbol(1, symbol_coeffs(m, basis), None)
    rule = (lambda z: symbol_point(m, z)) if N < 40 else phi
    gap = 0.0
    for _ in range(points):
        z = complex(*(rng.uniform(-0.7, 0.7, 2)))
        gap = max(gap, abs(fock_eval(SF, [z]) - apply_direct_quadrature(rule, F, z, order=80)))
    return gap


def suite_operator(seed=0, tolerances=None, **_):
    B = TruncationBasis(1, 64)
    H = build_matrix(named_multiplier("hilbert"), B)
    rng = np.random.default_rng(seed)
    ax = np.linspace(-6, 6, 41)
    g = grid_multiplier([ax], rng.standard_normal(41) + 1j * rng.standard_normal(41))
    adj = float(np.max(np.abs(adjoint(build_matrix(g, B)).entries - build_matrix(g.conj(), B).entries)))
    sc = block_distance(compose(build_matrix(named_multiplier("sin"), B), build_matrix(named_multiplier("cos"), B)),
                        build_matrix(named_multiplier("sin") * named_multiplier("cos"), B))
    return [
        Check("oracle_equivalence_gaussian", _oracle_gap(named_multiplier("gaussian", a=0.25), seed=seed),
              0.0, 1e-5, "le"),
        Check("adjoint_entrywise", adj, 0.0, 1e-12, "le"),
        Check("hilbert_anti_self_adjoint", float(np.max(np.abs(H.entries + adjoint(H).entries))), 0.0, 1e-12, "le"),
        Check("hilbert_commutator_block", commutator_norm(H, adjoint(H), 32), 0.0, 1e-6, "le"),
        Check("sin_norm_N96", operator_norm(build_matrix(named_multiplier("sin"), TruncationBasis(1, 96))),
              1.0, 5e-3),
        Check("sin_cos_product_block", sc, 0.0, 1e-6, "le"),
    ]


def suite_spectral(seed=0, tolerances=None, **_):
    B64, B128 = TruncationBasis(1, 64), TruncationBasis(1, 128)
    th = spectrum_estimate(named_multiplier("tanh"), B128)
    ev = th.eigenvalues.real
    hr = spectrum_estimate(named_multiplier("hilbert"), B64)
    chi = spectrum_estimate(named_multiplier("heaviside"), B128)
    P = reducing_projection([[(0, None)]], B64)
    defects = projection_defects(P, build_matrix(named_multiplier("hilbert"), B64))
    return [
        Check("jacobi_vs_identity", float(np.max(np.abs(hermitian_eigs(np.eye(5)) - 1))), 0.0, 1e-15, "le"),
        Check("tanh_inclusion", float(max(ev.max() - 1, -1 - ev.min(), 0.0)), 0.0, 1e-10, "le"),
        Check("tanh_hausdorff", th.hausdorff, 0.0, 0.05, "le"),
        Check("hilbert_clustering", hr.cluster_fraction(), 1.0, 0.9, "ge"),
        Check("heaviside_clustering", chi.cluster_fraction(), 1.0, 0.9, "ge"),
        Check("tanh_probes", max(p["min_singular_value"] for p in th.probes), 0.0, 0.05, "le"),
        Check("projection_self_adjoint", defects["self_adjoint"], 0.0, 1e-6, "le"),
        Check("projection_idempotent", defects["idempotent"], 0.0, 1e-6, "le"),
        Check("projection_commutes_hilbert", defects["commutes"], 0.0, 1e-6, "le"),
        Check("half_line_trace", float(np.trace(P.block()).real), len(P.block()) / 2, 1.0),
    ]


def suite_gallery(seed=0, tolerances=None, **_):
    checks = []
    for rep in (identity_checks(), hilbert_checks(), gaussian_checks(), modulation_checks(seed=seed),
                riesz_suite(), beurling_suite(), counterexample_suite()):
        for c in rep.checks:
            checks.append(Check(f"{rep.name}.{c.id}", c.value, c.reference, c.tolerance, c.relation))
    return checks


SUITES = {
    "quad": suite_quad,
    "hermite_fock": suite_hermite_fock,
    "bargmann": suite_bargmann,
    "multiplier": suite_multiplier,
    "symbol": suite_symbol,
    "operator": suite_operator,
    "spectral": suite_spectral,
    "gallery": suite_gallery,
}


def run_suite(name: str, seed: int = 0, tolerances=None):
    names = list(SUITES) if name == "all" else [name]
    out = []
    for nm in names:
        if nm not in SUITES:
            from .errors import ParameterError
            raise ParameterError(f"unknown suite {nm!r}; known: all, {', '.join(SUITES)}")
        for c in SUITES[nm](seed=seed, tolerances=tolerances):
            if tolerances and c.id in tolerances:
                c.tolerance = float(tolerances[c.id])
            out.append((nm, c))
    return out
