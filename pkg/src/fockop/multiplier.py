"""Bounded Fourier multipliers m on R^n and their sampled sup-norms / essential ranges.

A :class:`Multiplier` wraps a vectorised evaluation rule together with the
metadata quadrature needs: where it jumps (so panels can be split there) and
whether it has a point singularity at the origin.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import EvaluationError, ParameterError
from .quad import Cubature, gaussian_cubature, panel_line, polar_cubature, product_cubature

NAMED = ("identity", "zero", "hilbert", "gaussian", "modulation", "riesz", "beurling",
         "counterexample", "sin", "cos", "tanh", "heaviside", "sgn")


@dataclass(frozen=True, eq=False)
class Multiplier:
    """A measurable function on R^n, evaluated on arrays of shape ``(K, n)``.

    ``breaks`` lists axis-aligned hyperplanes ``(axis, coordinate)`` across
    which the function may jump.  ``origin_singular`` marks an angular
    discontinuity at the origin (Riesz, Beurling); ``singular`` marks an
    unbounded but integrable singularity at the listed breaks.
    """

    n: int
    func: object
    kind: str = "named"
    spec: dict = field(default_factory=dict)
    declared_sup: float | None = None
    breaks: tuple = ()
    origin_singular: bool = False
    singular: bool = False
    real: bool = False
    imaginary: bool = False

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim <= 1 and (self.n > 1 or x.ndim == 0)
        pts = x.reshape(-1, self.n)
        vals = np.asarray(self.func(pts), dtype=complex).reshape(-1)
        if vals.shape[0] != pts.shape[0]:
            vals = np.broadcast_to(vals, (pts.shape[0],)).copy()
        return complex(vals[0]) if single else vals

    def values(self, pts):
        """Evaluate at ``(K, n)`` points, raising on non-finite output."""
        vals = self(np.asarray(pts, dtype=float).reshape(-1, self.n))
        bad = ~np.isfinite(vals)
        if np.any(bad):
            k = int(np.argmax(bad))
            raise EvaluationError(f"multiplier not finite at {pts[k]!r}", point=pts[k])
        return vals

    def conj(self) -> "Multiplier":
        f = self.func
        return Multiplier(self.n, lambda x: np.conj(f(x)), "conj", {"kind": "conj", "of": self.spec},
                          self.declared_sup, self.breaks, self.origin_singular, self.singular,
                          self.real, self.imaginary)

    def __mul__(self, other: "Multiplier") -> "Multiplier":
        return product(self, other)

    def to_json(self) -> str:
        return json.dumps(self.spec, sort_keys=True)

    @property
    def label(self) -> str:
        return self.to_json()


def product(*factors: Multiplier) -> Multiplier:
    """Pointwise product; the declared bound is the product of the factors' bounds."""
    if not factors:
        raise ParameterError("product needs at least one factor")
    n = factors[0].n
    if any(f.n != n for f in factors):
        raise ParameterError("factors live in different dimensions")
    funcs = [f.func for f in factors]

    def func(x):
        out = np.ones(x.shape[0], dtype=complex)
        for g in funcs:
            out = out * np.asarray(g(x), dtype=complex)
        return out

    sups = [f.declared_sup for f in factors]
    sup = math.prod(sups) if all(s is not None for s in sups) else None
    n_imag = sum(f.imaginary for f in factors)
    all_typed = all(f.real or f.imaginary for f in factors)
    return Multiplier(
        n, func, "product", {"kind": "product", "factors": [f.spec for f in factors]}, sup,
        tuple(sorted({b for f in factors for b in f.breaks})),
        any(f.origin_singular for f in factors), any(f.singular for f in factors),
        all_typed and n_imag % 2 == 0, all_typed and n_imag % 2 == 1)


def _named(name, func, n=1, sup=None, breaks=(), real=False, imaginary=False, **kw):
    spec = {"kind": "named", "name": name}
    spec.update({k: v for k, v in kw.pop("params", {}).items()})
    return Multiplier(n, func, "named", spec, sup, tuple(breaks), real=real, imaginary=imaginary, **kw)


def named_multiplier(name: str, **params) -> Multiplier:
    """Named multipliers used by the gallery, plus a few smooth test functions.

    ============== ================================== =========================
    name           m(x)                               params
    ============== ================================== =========================
    identity       1                                  n (default 1)
    zero           0                                  n
    hilbert        -i sgn(x)
    gaussian       exp(-4a/(1-2a) x^2)                a in (0, 1/2)
    modulation     exp(a^2/2) exp(-2i a x)            a real
    riesz          -i x_j / |x|                       j (1-based), n >= 2
    beurling       ((x1 - i x2)/(x1 + i x2))^k        k >= 1 (n = 2)
    counterexample |x|^{-1/5} exp(-x^2)
    sin, cos, tanh the usual functions
    heaviside      indicator of [0, inf)
    sgn            sign(x)
    ============== ================================== =========================
    """
    name = str(name).lower()
    if name == "identity":
        n = int(params.get("n", 1))
        return _named(name, lambda x: np.ones(x.shape[0]), n, 1.0, real=True, params={"n": n} if n != 1 else {})
    if name == "zero":
        n = int(params.get("n", 1))
        return _named(name, lambda x: np.zeros(x.shape[0]), n, 0.0, real=True, imaginary=True,
                      params={"n": n} if n != 1 else {})
    if name == "hilbert":
        return _named(name, lambda x: -1j * np.sign(x[:, 0]), 1, 1.0, [(0, 0.0)], imaginary=True)
    if name == "sgn":
        return _named(name, lambda x: np.sign(x[:, 0]), 1, 1.0, [(0, 0.0)], real=True)
    if name == "heaviside":
        return _named(name, lambda x: (x[:, 0] >= 0).astype(float), 1, 1.0, [(0, 0.0)], real=True)
    if name == "gaussian":
        a = float(params.get("a", 0.25))
        if not 0 < a < 0.5:
            raise ParameterError(f"gaussian multiplier needs 0 < a < 1/2, got {a}")
        c = 4 * a / (1 - 2 * a)
        return _named(name, lambda x: np.exp(-c * x[:, 0] ** 2), 1, 1.0, real=True, params={"a": a})
    if name == "modulation":
        a = float(params.get("a", 0.0))
        c0 = math.exp(0.5 * a * a)
        return _named(name, lambda x: c0 * np.exp(-2j * a * x[:, 0]), 1, c0, params={"a": a})
    if name == "sin":
        return _named(name, lambda x: np.sin(x[:, 0]), 1, 1.0, real=True)
    if name == "cos":
        return _named(name, lambda x: np.cos(x[:, 0]), 1, 1.0, real=True)
    if name == "tanh":
        return _named(name, lambda x: np.tanh(x[:, 0]), 1, 1.0, real=True)
    if name == "counterexample":
        def psi(x):
            ax = np.abs(x[:, 0])
            with np.errstate(divide="ignore"):
                return np.where(ax > 0, ax ** -0.2 * np.exp(-x[:, 0] ** 2), np.inf)
        return _named(name, psi, 1, None, [(0, 0.0)], real=True, singular=True)
    if name == "riesz":
        n = int(params.get("n", 2))
        j = int(params.get("j", 1))
        if n < 2 or not 1 <= j <= n:
            raise ParameterError(f"riesz needs n >= 2 and 1 <= j <= n, got n={n}, j={j}")

        def riesz(x):
            r = np.sqrt(np.sum(x * x, axis=1))
            with np.errstate(invalid="ignore", divide="ignore"):
                return np.where(r > 0, -1j * x[:, j - 1] / r, 0.0)
        return _named(name, riesz, n, 1.0, imaginary=True, origin_singular=True, params={"j": j, "n": n})
    if name == "beurling":
        k = int(params.get("k", 1))
        if k < 1:
            raise ParameterError("beurling power k must be >= 1")

        def beurling(x):
            z = x[:, 0] + 1j * x[:, 1]
            with np.errstate(invalid="ignore", divide="ignore"):
                return np.where(z != 0, (np.conj(z) / z) ** k, 0.0)
        return _named(name, beurling, 2, 1.0, origin_singular=True, params={"k": k} if k != 1 else {})
    raise ParameterError(f"unknown multiplier name {name!r}; known: {', '.join(NAMED)}")


def indicator(boxes) -> Multiplier:
    """Indicator of a finite union of axis-aligned boxes ``[[lo, hi], ...]`` per box.

    Infinite bounds are allowed (``float('inf')``, or ``None`` in JSON).
    """
    boxes = [[(_bound(lo, -math.inf), _bound(hi, math.inf)) for lo, hi in box] for box in boxes]
    if not boxes:
        raise ParameterError("indicator needs at least one box")
    n = len(boxes[0])
    if any(len(b) != n for b in boxes):
        raise ParameterError("boxes have different dimensions")
    for box in boxes:
        if any(not lo < hi for lo, hi in box):
            raise ParameterError(f"box {box!r} has empty interior")

    def func(x):
        inside = np.zeros(x.shape[0], dtype=bool)
        for box in boxes:
            ok = np.ones(x.shape[0], dtype=bool)
            for j, (lo, hi) in enumerate(box):
                ok &= (x[:, j] >= lo) & (x[:, j] <= hi)
            inside |= ok
        return inside.astype(float)

    brk = sorted({(j, c) for box in boxes for j, side in enumerate(box) for c in side if math.isfinite(c)})
    spec = {"kind": "indicator",
            "boxes": [[[_json_bound(lo), _json_bound(hi)] for lo, hi in box] for box in boxes]}
    return Multiplier(n, func, "indicator", spec, 1.0, tuple(brk), real=True)


def _bound(v, default):
    if v is None:
        return default
    return float(v)


def _json_bound(v):
    return v if math.isfinite(v) else None


def grid_multiplier(axes, values, interp: str = "linear") -> Multiplier:
    """Tabulated multiplier on a tensor grid, constant beyond the grid edges."""
    axes = [np.asarray(a, dtype=float) for a in axes]
    vals = np.asarray(values, dtype=complex)
    if vals.ndim == 1 and len(axes) > 1:
        vals = vals.reshape([len(a) for a in axes])
    if interp not in ("linear", "nearest"):
        raise ParameterError(f"interp must be 'linear' or 'nearest', got {interp!r}")
    if list(vals.shape) != [len(a) for a in axes]:
        raise ParameterError(f"values shape {vals.shape} does not match axes {[len(a) for a in axes]}")
    for a in axes:
        if a.ndim != 1 or len(a) < 2 or np.any(np.diff(a) <= 0):
            raise ParameterError("grid axes must be strictly increasing with at least 2 nodes")
    if not np.all(np.isfinite(vals)):
        raise ParameterError("grid values must be finite")
    lo = np.array([a[0] for a in axes])
    hi = np.array([a[-1] for a in axes])
    re = RegularGridInterpolator(axes, vals.real, method=interp)
    im = RegularGridInterpolator(axes, vals.imag, method=interp)

    def func(x):
        xc = np.clip(x, lo, hi)
        return re(xc) + 1j * im(xc)

    brk = ()
    if interp == "nearest":
        brk = tuple((j, float(c)) for j, a in enumerate(axes) for c in 0.5 * (a[1:] + a[:-1]))
    spec = {"kind": "grid", "axes": [a.tolist() for a in axes],
            "values": [[float(v.real), float(v.imag)] for v in vals.reshape(-1)], "interp": interp}
    return Multiplier(len(axes), func, "grid", spec, float(np.max(np.abs(vals))), brk,
                      real=bool(np.all(vals.imag == 0)), imaginary=bool(np.all(vals.real == 0)))


def from_spec(spec) -> Multiplier:
    """Build a multiplier from its JSON form (dict, JSON text, or a bare name)."""
    if isinstance(spec, str):
        text = spec.strip()
        if not text.startswith("{"):
            return named_multiplier(text)
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"malformed multiplier JSON: {exc}") from exc
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ParameterError("multiplier spec must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "named":
            params = {k: v for k, v in spec.items() if k not in ("kind", "name")}
            return named_multiplier(spec["name"], **params)
        if kind == "grid":
            values = [complex(re, im) for re, im in spec["values"]]
            return grid_multiplier(spec["axes"], values, spec.get("interp", "linear"))
        if kind == "product":
            return product(*[from_spec(f) for f in spec["factors"]])
        if kind == "indicator":
            return indicator(spec["boxes"])
        if kind == "conj":
            return from_spec(spec["of"]).conj()
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"malformed multiplier spec: {exc}") from exc
    raise ParameterError(f"unknown multiplier kind {kind!r}")


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid ``[-R, R]^n`` with ``points`` nodes per axis."""

    R: float = 10.0
    points: int = 2048
    eps_cluster: float = 1e-6

    def axes(self, n):
        per_axis = self.points if n == 1 else max(16, int(round(self.points ** (2.0 / (n + 1)))))
        return [np.linspace(-self.R, self.R, per_axis)] * n

    def sample_points(self, n):
        grids = np.meshgrid(*self.axes(n), indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1)


def _samples(m, grid):
    if isinstance(grid, GridSpec) or grid is None:
        pts = (grid or GridSpec()).sample_points(m.n)
    else:
        pts = np.asarray(grid, dtype=float).reshape(-1, m.n)
    return pts, m(pts)


def sup_norm(m: Multiplier, grid=None) -> float:
    """Largest ``|m|`` over the sample grid; a lower bound for the essential sup.

    ``grid`` is a :class:`GridSpec` or an explicit ``(K, n)`` array of points.
    Non-finite samples are skipped (they sit on a null set by construction).
    """
    _, vals = _samples(m, grid)
    a = np.abs(vals)
    a = a[np.isfinite(a)]
    return float(a.max()) if a.size else 0.0


def essential_range(m: Multiplier, grid=None, eps_cluster: float | None = None) -> np.ndarray:
    """Sampled values of ``m`` deduplicated to resolution ``eps_cluster``."""
    if eps_cluster is None:
        eps_cluster = grid.eps_cluster if isinstance(grid, GridSpec) else GridSpec().eps_cluster
    _, vals = _samples(m, grid)
    vals = vals[np.isfinite(vals)]
    key = np.round(vals.real / eps_cluster) + 1j * np.round(vals.imag / eps_cluster)
    _, first = np.unique(key, return_index=True)
    out = vals[np.sort(first)]
    return out[np.lexsort((out.imag, out.real))]


def support_radius(N: int) -> float:
    """Half-width beyond which every ``psi_alpha``, ``|alpha| <= N``, is negligible."""
    return math.sqrt(N + 0.5) + 7.0


def cubature_for(m: Multiplier, N: int, order: int | None = None) -> Cubature:
    """Integration rule for ``int m(x) psi_alpha(x) psi_beta(x) dx`` with ``|alpha|, |beta| <= N``.

    Smooth multipliers get a Gauss-Hermite product rule of ``order`` points per
    axis (default ``max(200, 4N)`` in 1-d, ``max(60, 2N + 20)`` otherwise).
    Jumps across hyperplanes get Gauss-Legendre panels split at the jumps;
    an angular singularity at the origin of R^2 gets a polar rule.
    """
    L = support_radius(N)
    per_panel = max(24, int(8 * math.sqrt(N + 1)) + 16)
    if m.origin_singular and m.n == 2:
        ang = 2 * N + 24
        if order:
            ang = max(ang, order)
        return polar_cubature(per_panel, ang, L, panels=int(math.ceil(L)))
    if m.breaks:
        lines = []
        for j in range(m.n):
            cuts = [c for axis, c in m.breaks if axis == j]
            lines.append(panel_line(cuts, L, per_panel, graded=m.singular, max_panel=1.0))
        if m.n == 1:
            x, w = lines[0]
            return Cubature(x[:, None], w, f"panels({len(x)})")
        return product_cubature(lines)
    if order is None:
        order = max(200, 4 * N) if m.n == 1 else max(60, 2 * N + 20)
    return gaussian_cubature(order, m.n)
