"""Spectra, compactness and reducing projections of truncated operators.

Spectra are computed only through Hermitian reductions: real multipliers
give Hermitian matrices, purely imaginary ones anti-Hermitian matrices, and
anything else is handled through the eigenvectors of a Hermitian combination
of its real and imaginary parts (exact for normal matrices, approximate for
the nearly normal compressions seen here).
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, ParameterError
from .hermite import TruncationBasis, psi_matrix
from .multiplier import GridSpec, Multiplier, essential_range, indicator
from .operator import OperatorMatrix, build_matrix, operator_norm
from .parallel import pmap

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 40
CLUSTER_RADIUS = 0.05
CLUSTER_FRACTION = 0.9
MAX_PROBES = 9
# theta for the Hermitian combination cos(t) Re S + sin(t) Im S; any generic value works
MIX_ANGLE = 0.6180339887498949


def _round_robin(m):
    """Pairings covering every unordered pair of ``0..m-1`` exactly once (circle method)."""
    k = m + (m % 2)
    ring = list(range(k))
    rounds = []
    for _ in range(k - 1):
        pairs = [(ring[i], ring[k - 1 - i]) for i in range(k // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < m and q < m]
        if pairs:
            rounds.append(np.array(pairs, dtype=int))
        ring = [ring[0], ring[-1]] + ring[1:-1]
    return rounds


def _off(A):
    return math.sqrt(max(np.linalg.norm(A) ** 2 - np.linalg.norm(np.diag(A)) ** 2, 0.0))


def jacobi_eigh(H, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS, vectors: bool = False):
    """Cyclic Jacobi for a complex Hermitian array.

    Each sweep visits every off-diagonal pair once, grouped into rounds of
    disjoint pairs that are rotated together.  Returns unsorted eigenvalues
    (and the accumulated unitary when ``vectors`` is set).
    """
    A = np.array(H, dtype=complex)
    m = A.shape[0]
    V = np.eye(m, dtype=complex) if vectors else None
    if m <= 1:
        return (A.diagonal().real.copy(), V) if vectors else A.diagonal().real.copy()
    A = 0.5 * (A + A.conj().T)
    stop = tol * max(1.0, np.linalg.norm(A))
    rounds = _round_robin(m)
    off = _off(A)
    sweeps = 0
    while off >= stop:
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off = {off:.3g})", last=off)
        for pq in rounds:
            p, q = pq[:, 0], pq[:, 1]
            apq = A[p, q]
            mag = np.abs(apq)
            live = mag > 1e-300
            if not np.any(live):
                continue
            p, q, apq, mag = p[live], q[live], apq[live], mag[live]
            app, aqq = A[p, p].real, A[q, q].real
            ph = apq / mag
            theta = (aqq - app) / (2.0 * mag)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            jpp, jpq = c, s
            jqp, jqq = -s * np.conj(ph), c * np.conj(ph)
            Ap, Aq = A[:, p].copy(), A[:, q].copy()
            A[:, p] = Ap * jpp + Aq * jqp
            A[:, q] = Ap * jpq + Aq * jqq
            Ap, Aq = A[p, :].copy(), A[q, :].copy()
            A[p, :] = np.conj(jpp)[:, None] * Ap + np.conj(jqp)[:, None] * Aq
            A[q, :] = np.conj(jpq)[:, None] * Ap + np.conj(jqq)[:, None] * Aq
            A[p, q] = 0.0
            A[q, p] = 0.0
            if vectors:
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = Vp * jpp + Vq * jqp
                V[:, q] = Vp * jpq + Vq * jqq
        sweeps += 1
        off = _off(A)
    logger.debug("Jacobi converged after %d sweeps", sweeps)
    lam = A.diagonal().real.copy()
    return (lam, V) if vectors else lam


def _entries(H):
    return H.entries if isinstance(H, OperatorMatrix) else np.asarray(H, dtype=complex)


def hermitian_eigs(H) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix (ascending), by cyclic Jacobi rotations."""
    A = _entries(H)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError("hermitian_eigs needs a square matrix")
    dev = float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0
    if dev > HERMITIAN_TOL:
        raise ParameterError(f"matrix is not Hermitian (max |H - H*| = {dev:.3g})")
    return np.sort(jacobi_eigh(A))


def hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance between two finite point sets in C."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.size == 0 or b.size == 0:
        return math.inf
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def cluster_fraction(eigs, targets, radius: float = CLUSTER_RADIUS) -> float:
    """Fraction of ``eigs`` within ``radius`` of some point of ``targets``."""
    eigs = np.asarray(eigs, dtype=complex).reshape(-1)
    t = np.asarray(targets, dtype=complex).reshape(-1)
    if eigs.size == 0:
        return 1.0
    d = np.abs(eigs[:, None] - t[None, :]).min(axis=1)
    return float(np.mean(d <= radius))


def min_singular_value(S, mu) -> float:
    A = _entries(S)
    return float(np.linalg.svd(A - mu * np.eye(A.shape[0]), compute_uv=False)[-1])


def classify(m: Multiplier, grid: GridSpec | None = None) -> str:
    if m.real:
        return "hermitian"
    if m.imaginary:
        return "anti_hermitian"
    vals = m.values(np.asarray((grid or GridSpec()).sample_points(m.n)))
    vals = vals[np.isfinite(vals)]
    if np.allclose(vals.imag, 0.0, atol=1e-14):
        return "hermitian"
    if np.allclose(vals.real, 0.0, atol=1e-14):
        return "anti_hermitian"
    a = np.abs(vals)
    # constant modulus: a multiple of a unitary (modulation symbols carry a constant factor)
    if a.size and np.allclose(a, a[0], rtol=1e-12, atol=0.0):
        return "unitary_symbol"
    return "general"


def _probe_points(ref, k=MAX_PROBES):
    if ref.size <= k:
        return ref
    pick = np.unique(np.round(np.linspace(0, ref.size - 1, k)).astype(int))
    return ref[pick]


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    reference: np.ndarray
    hausdorff: float
    N: int
    order: int | None
    classification: str
    probes: list = field(default_factory=list)
    caveat: bool = False

    def __post_init__(self):
        if self.hausdorff < 0:
            raise ParameterError("hausdorff distance must be nonnegative")

    def cluster_fraction(self, targets=None, radius: float = CLUSTER_RADIUS) -> float:
        return cluster_fraction(self.eigenvalues, self.reference if targets is None else targets, radius)

    def to_dict(self):
        pair = lambda v: [float(np.real(v)), float(np.imag(v))]
        out = {
            "eigenvalues": [pair(v) for v in self.eigenvalues],
            "reference": [pair(v) for v in self.reference],
            "hausdorff": float(self.hausdorff),
            "N": self.N,
            "order": self.order,
            "classification": self.classification,
            "probes": [{"mu": pair(p["mu"]), "min_singular_value": float(p["min_singular_value"])}
                       for p in self.probes],
        }
        if self.caveat:
            out["caveat"] = True
        return out

    def to_json(self):
        return json.dumps(self.to_dict())


def eigenvalues_of(S: OperatorMatrix, classification: str) -> np.ndarray:
    """Eigenvalues of a truncated operator along its Hermitian reduction path."""
    A = S.entries
    if classification == "hermitian":
        return hermitian_eigs(0.5 * (A + A.conj().T)).astype(complex)
    if classification == "anti_hermitian":
        lam = hermitian_eigs(0.5 * (1j * A + (1j * A).conj().T))
        return np.sort_complex(-1j * lam)
    re = 0.5 * (A + A.conj().T)
    im = (A - A.conj().T) / 2j
    _, V = jacobi_eigh(math.cos(MIX_ANGLE) * re + math.sin(MIX_ANGLE) * im, vectors=True)
    # Rayleigh quotients v* S v on the shared (approximate) eigenbasis
    lam = np.einsum("ij,ik,kj->j", V.conj(), A, V)
    return np.sort_complex(lam)


def spectrum_estimate(m: Multiplier, basis: TruncationBasis, order: int | None = None,
                      grid: GridSpec | None = None, probes: int = MAX_PROBES,
                      S: OperatorMatrix | None = None) -> SpectrumReport:
    """Truncated eigenvalues, Hausdorff distance to the sampled essential range, and resolvent probes."""
    grid = grid or GridSpec()
    cls = classify(m, grid)
    S = S if S is not None else build_matrix(m, basis, order=order)
    eigs = eigenvalues_of(S, cls)
    ref = essential_range(m, grid)
    mus = list(_probe_points(ref, probes)) if probes else []
    report_probes = [{"mu": complex(mu), "min_singular_value": v}
                     for mu, v in zip(mus, pmap(lambda mu: min_singular_value(S, mu), mus))]
    return SpectrumReport(eigs, ref, hausdorff(eigs, ref), basis.N, S.order, cls,
                          report_probes, caveat=(cls == "general"))


def hermite_coeffs_of_indicator(basis: TruncationBasis, lo: float, hi: float, points: int = 48) -> np.ndarray:
    """``<chi_[lo, hi], psi_k>`` for one variable, by Gauss-Legendre on the interval."""
    x, w = _interval_rule(lo, hi, points)
    return psi_matrix(basis, x[:, None]) @ w


def _interval_rule(lo, hi, points):
    t, w = np.polynomial.legendre.leggauss(points)
    return 0.5 * (hi - lo) * t + 0.5 * (hi + lo), 0.5 * (hi - lo) * w


@dataclass
class CompactnessReport:
    N: int
    order: int | None
    zero: bool
    widths: list
    norms: list
    overlaps: list

    def to_dict(self):
        return {"N": self.N, "order": self.order, "zero": self.zero, "widths": self.widths,
                "norms": self.norms, "overlaps": self.overlaps}


def compactness_probe(m: Multiplier, basis: TruncationBasis, intervals=None, kmax: int = 6,
                      low_degree: int = 4, order: int | None = None) -> CompactnessReport:
    """Shrinking normalised bumps ``f_k = |E_k|^{-1/2} chi_{E_k}`` pushed through ``S``.

    ``f_k`` lives on the multiplier (Fourier) side; its Fock-side image has
    coefficients ``i^{|alpha|} <f_k, psi_alpha>``.  Reports, for each ``k``,
    ``||S P g_k|| / ||P g_k||`` on the truncation and the largest overlap
    ``|<f_k, psi_j>|`` with ``j <= low_degree``, the latter computed exactly
    on the interval so it does not depend on ``N``.  One variable only.
    """
    if basis.n != 1 or m.n != 1:
        raise ParameterError("compactness_probe is implemented for n = 1")
    S = build_matrix(m, basis, order=order)
    if np.max(np.abs(S.entries)) == 0.0:
        return CompactnessReport(basis.N, S.order, True, [], [], [])
    if intervals is None:
        intervals = [(0.0, 2.0 ** -k) for k in range(kmax + 1)]
    phase = 1j ** (basis.degrees % 4)
    small = TruncationBasis(1, low_degree)
    widths, norms, overlaps = [], [], []
    for lo, hi in intervals:
        if not hi > lo:
            raise ParameterError(f"empty interval [{lo}, {hi}]")
        scale = 1.0 / math.sqrt(hi - lo)
        g = phase * scale * hermite_coeffs_of_indicator(basis, lo, hi)
        ng = np.linalg.norm(g)
        norms.append(float(np.linalg.norm(S.entries @ g) / ng))
        overlaps.append(float(np.max(np.abs(scale * hermite_coeffs_of_indicator(small, lo, hi)))))
        widths.append(float(hi - lo))
    return CompactnessReport(basis.N, S.order, False, widths, norms, overlaps)


def reducing_projection(boxes, basis: TruncationBasis, order: int | None = None) -> OperatorMatrix:
    """Matrix of ``S`` for the indicator of a finite union of boxes.

    ``boxes`` is a list of ``[(lo, hi), ...]`` per box (``None`` for an
    infinite end).  A box of zero volume is rejected.
    """
    boxes = [list(b) for b in boxes]
    if not boxes:
        raise ParameterError("empty set: no boxes given")
    for b in boxes:
        if len(b) != basis.n:
            raise ParameterError(f"box {b!r} has the wrong dimension for n = {basis.n}")
        for lo, hi in b:
            lo_ = -math.inf if lo is None else float(lo)
            hi_ = math.inf if hi is None else float(hi)
            if not hi_ > lo_:
                raise ParameterError(f"box {b!r} has zero volume")
    return build_matrix(indicator(boxes), basis, order=order)


def projection_defects(P: OperatorMatrix, S: OperatorMatrix | None = None, max_degree: int | None = None):
    """Block norms of ``P - P*``, ``P^2 - P`` and (if given) ``PS - SP``."""
    d = P.basis.N // 2 if max_degree is None else max_degree
    k = len(P.basis.block(d))
    A = P.entries
    out = {
        "self_adjoint": operator_norm((A - A.conj().T)[:k, :k]),
        "idempotent": operator_norm((A @ A - A)[:k, :k]),
    }
    if S is not None:
        B = S.entries
        out["commutes"] = operator_norm((A @ B - B @ A)[:k, :k])
    return out

