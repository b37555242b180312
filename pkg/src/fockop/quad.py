"""Gauss-Hermite quadrature and Gaussian-weighted integration on R^n and C^n.

Two kinds of rule live here.  :class:`QuadratureRule` is the classical
Gauss-Hermite rule for the weight ``exp(-t**2)``.  :class:`Cubature` is a
plain ``dx`` rule (points and weights with ``sum(w * g(x)) ~ int g dx``) built
for integrands that already carry a Gaussian factor, e.g. products of Hermite
functions; it is what the operator and symbol modules consume.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import EvaluationError, ParameterError

MAX_ORDER = 4096
SQRT_PI = math.sqrt(math.pi)

# default orders
SYMBOL_ORDER = 200
FOCK_ORDER = 60


def hermite_function_table(kmax, t):
    """Orthonormal Hermite functions ``h_0..h_kmax`` at the points ``t``.

    ``h_k(t) = (2^k k! sqrt(pi))^{-1/2} H_k(t) exp(-t^2/2)``, computed with the
    normalised three-term recurrence so nothing overflows for large ``k``.
    Returns an array of shape ``(kmax + 1,) + t.shape``.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty((kmax + 1,) + t.shape)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * t * t)
    if kmax >= 1:
        out[1] = math.sqrt(2.0) * t * out[0]
    for k in range(1, kmax):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * t * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Hermite rule for ``int g(t) exp(-t^2) dt``.

    ``scaled_weights`` holds ``weights * exp(nodes**2)``, which stays O(1)
    even where ``weights`` underflows; use it for integrands that contain
    their own Gaussian factor.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    scaled_weights: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        for arr in (self.nodes, self.weights, self.scaled_weights):
            arr.setflags(write=False)


@functools.lru_cache(maxsize=64)
def gauss_hermite(order: int) -> QuadratureRule:
    """Gauss-Hermite nodes and weights of the given order.

    Nodes start from the Golub-Welsch eigenvalues of the Jacobi matrix and are
    polished by Newton steps on the orthonormal Hermite function ``h_order``.
    The rule is symmetrised explicitly.
    """
    if not isinstance(order, (int, np.integer)) or not 1 <= order <= MAX_ORDER:
        raise ParameterError(f"order must be an integer in [1, {MAX_ORDER}], got {order!r}")
    order = int(order)
    if order == 1:
        z = np.zeros(1)
        return QuadratureRule(1, z, np.array([SQRT_PI]), np.array([SQRT_PI]))

    off = np.sqrt(np.arange(1, order) / 2.0)
    t = eigh_tridiagonal(np.zeros(order), off, eigvals_only=True)
    t = np.sort(t)
    t = 0.5 * (t - t[::-1])

    for _ in range(10):
        hn, hm, _ = _scaled_tail(order, t)
        # h_n' = sqrt(2n) h_{n-1} - t h_n
        dh = math.sqrt(2.0 * order) * hm - t * hn
        step = hn / dh
        t = t - step
        t = 0.5 * (t - t[::-1])
        if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(t))):
            break
    if order % 2:
        t[order // 2] = 0.0

    _, hm, logscale = _scaled_tail(order, t)
    # weight * exp(t^2) = 1 / (n h_{n-1}(t)^2)
    log_scaled = -2.0 * logscale - np.log(order * hm * hm)
    log_scaled = 0.5 * (log_scaled + log_scaled[::-1])
    scaled = np.exp(log_scaled)
    weights = np.exp(log_scaled - t * t)
    total = math.fsum(weights)
    fix = SQRT_PI / total
    weights = weights * fix
    scaled = scaled * fix
    return QuadratureRule(order, t, weights, scaled)


def _scaled_tail(n, t):
    """``h_n(t)``, ``h_{n-1}(t)`` as ``value * exp(logscale)`` (no under/overflow)."""
    log = -0.25 * math.log(math.pi) - 0.5 * t * t
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    for k in range(n):
        nxt = math.sqrt(2.0 / (k + 1)) * t * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e150
        if np.any(big):
            f = np.where(big, 1e-150, 1.0)
            cur = cur * f
            prev = prev * f
            log = log - np.log(f)
    return cur, prev, log


def tensor_nodes(rule: QuadratureRule, n: int):
    """Lexicographic tensor-product nodes ``(K, n)`` and weights ``(K,)``."""
    if n < 1:
        raise ParameterError("dimension must be >= 1")
    idx = np.array(list(itertools.product(range(rule.order), repeat=n)), dtype=int)
    pts = rule.nodes[idx]
    w = np.prod(rule.weights[idx], axis=1)
    return pts, w


def _check_finite(values, pts):
    bad = ~np.isfinite(values)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise EvaluationError(f"integrand is not finite at node {pts[k]!r}", point=pts[k])


def integrate_weighted_Rn(f, rule: QuadratureRule, n: int, gauss_exponent: float = 1.0) -> complex:
    """Approximate ``int_{R^n} f(x) exp(-b |x|^2) dx`` with ``b = gauss_exponent``.

    ``f`` is called once with an array of shape ``(K, n)`` and must return
    ``K`` values.
    """
    b = float(gauss_exponent)
    if not b > 0:
        raise ParameterError("gauss_exponent must be positive")
    pts, w = tensor_nodes(rule, n)
    pts = pts / math.sqrt(b)
    vals = np.asarray(f(pts), dtype=complex).reshape(-1)
    _check_finite(vals, pts)
    return complex(np.sum(w * vals) / b ** (n / 2.0))


def integrate_fock_measure(F, rule: QuadratureRule, n: int) -> complex:
    """Approximate ``int_{C^n} F(w) dlambda(w)``, ``dlambda = pi^-n exp(-|w|^2) dw``.

    ``F`` receives complex points of shape ``(K, n)``; the 2n real coordinates
    are ordered ``(Re w_1..Re w_n, Im w_1..Im w_n)`` in the tensor loop.
    """
    pts, w = tensor_nodes(rule, 2 * n)
    z = pts[:, :n] + 1j * pts[:, n:]
    vals = np.asarray(F(z), dtype=complex).reshape(-1)
    _check_finite(vals, z)
    return complex(np.sum(w * vals) / math.pi ** n)


@dataclass(frozen=True, eq=False)
class Cubature:
    """Plain rule ``int_{R^n} g(x) dx ~ sum_k weights[k] * g(points[k])``.

    Only accurate for integrands that decay like a Gaussian; ``label`` records
    how it was built so reports can carry the provenance.
    """

    points: np.ndarray
    weights: np.ndarray
    label: str = ""

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def integrate(self, g) -> complex:
        vals = np.asarray(g(self.points), dtype=complex).reshape(-1)
        _check_finite(vals, self.points)
        return complex(np.sum(self.weights * vals))


def gaussian_cubature(order: int, n: int = 1) -> Cubature:
    """Gauss-Hermite rule rescaled for integrands ``poly(x) * exp(-2|x|^2)``.

    Exact for polynomial degree up to ``2 * order - 1`` per axis.
    """
    rule = gauss_hermite(order)
    x = rule.nodes / math.sqrt(2.0)
    w = rule.scaled_weights / math.sqrt(2.0)
    idx = np.array(list(itertools.product(range(order), repeat=n)), dtype=int)
    return Cubature(x[idx], np.prod(w[idx], axis=1), f"gauss-hermite({order})^{n}")


def _legendre_panel(a, b, p):
    t, w = np.polynomial.legendre.leggauss(p)
    return 0.5 * (b - a) * t + 0.5 * (a + b), 0.5 * (b - a) * w


def panel_line(breaks, half_width, points_per_panel, graded=False, max_panel=2.0):
    """1-d Gauss-Legendre rule on ``[-half_width, half_width]`` split at ``breaks``.

    Panels longer than ``max_panel`` are subdivided.  With ``graded=True``
    panels touching a break are refined geometrically towards it, which keeps
    integrable algebraic singularities (``|x|^-s``) under control.
    """
    L = float(half_width)
    cuts = sorted({-L, L} | {float(c) for c in breaks if -L < c < L})
    xs, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        pieces = max(1, int(math.ceil((b - a) / max_panel)))
        edges = np.linspace(a, b, pieces + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            sub = [(lo, hi)]
            if graded:
                sub = _graded(lo, hi, lo in breaks, hi in breaks)
            for s0, s1 in sub:
                x, w = _legendre_panel(s0, s1, points_per_panel)
                xs.append(x)
                ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def _graded(a, b, left, right, ratio=0.15, levels=16):
    if left and right:
        mid = 0.5 * (a + b)
        return _graded(a, mid, True, False) + _graded(mid, b, False, True)
    if not (left or right):
        return [(a, b)]
    h = b - a
    ds = [h * ratio ** k for k in range(levels + 1)] + [0.0]
    out = []
    for d0, d1 in zip(ds[:-1], ds[1:]):
        if left:
            out.append((a + d1, a + d0))
        else:
            out.append((b - d0, b - d1))
    return out


def polar_cubature(n_radial: int, n_angular: int, radius: float, panels: int = 4) -> Cubature:
    """Polar rule on the disc of given radius in R^2.

    Radial Gauss-Legendre panels (with the ``r`` Jacobian) times an
    equispaced trapezoid in angle, offset by half a step so no node lies on
    the axes.  Integrands with an angular jump only at the origin are
    integrated spectrally.
    """
    edges = np.linspace(0.0, radius, panels + 1)
    rs, wr = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        r, w = _legendre_panel(a, b, n_radial)
        rs.append(r)
        wr.append(w * r)
    r = np.concatenate(rs)
    wr = np.concatenate(wr)
    theta = (np.arange(n_angular) + 0.5) * (2 * math.pi / n_angular)
    wt = 2 * math.pi / n_angular
    R, T = np.meshgrid(r, theta, indexing="ij")
    pts = np.stack([R * np.cos(T), R * np.sin(T)], axis=-1).reshape(-1, 2)
    w = (wr[:, None] * wt * np.ones_like(theta)[None, :]).reshape(-1)
    return Cubature(pts, w, f"polar({panels}x{n_radial},{n_angular},R={radius:g})")


def product_cubature(lines) -> Cubature:
    """Tensor product of 1-d ``(x, w)`` rules."""
    idx = list(itertools.product(*[range(len(x)) for x, _ in lines]))
    idx = np.array(idx, dtype=int)
    pts = np.stack([lines[j][0][idx[:, j]] for j in range(len(lines))], axis=1)
    w = np.prod(np.stack([lines[j][1][idx[:, j]] for j in range(len(lines))], axis=1), axis=1)
    return Cubature(pts, w, "panel-product")
