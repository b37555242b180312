"""Truncated matrices of S_phi and the operations on them.

In the monomial basis ``e_alpha`` (the Bargmann image of ``psi_alpha``) the
operator ``S_phi = B F^{-1} M_m F B^{-1}`` has entries

    S[alpha, beta] = i^{|alpha| - |beta|} int m(x) psi_alpha(x) psi_beta(x) dx.

A matrix built on ``|alpha| <= N`` is the compression ``P_N S P_N``.  Products
of compressions differ from compressions of products by terms that live in
the high degrees, so identities are checked on the leading ``N/2`` block.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, EvaluationError, ParameterError
from .hermite import FockVector, TruncationBasis, fock_eval, psi_matrix
from .multiplier import Multiplier, cubature_for
from .parallel import max_threads, pmap
from .quad import Cubature, gauss_hermite, tensor_nodes

logger = logging.getLogger(__name__)

DIRECT_MAX_ORDER = 160
CHUNK_ENTRIES = 1 << 22


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense matrix of a truncated operator; rows are outputs, columns inputs."""

    basis: TruncationBasis
    entries: np.ndarray
    source: str = ""
    order: int | None = None

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.shape != (len(self.basis), len(self.basis)):
            raise ParameterError(f"matrix shape {a.shape} does not match basis size {len(self.basis)}")
        if not np.all(np.isfinite(a)):
            raise EvaluationError("matrix has non-finite entries")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def N(self):
        return self.basis.N

    def block(self, max_degree: int | None = None) -> np.ndarray:
        """Leading block on ``|alpha| <= max_degree`` (default ``N // 2``)."""
        d = self.basis.N // 2 if max_degree is None else max_degree
        k = len(self.basis.block(d))
        return self.entries[:k, :k]

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return compose(self, other)
        if isinstance(other, FockVector):
            return apply(self, other)
        return NotImplemented

    def to_dict(self):
        return {"n": self.basis.n, "N": self.basis.N,
                "entries": [[float(v.real), float(v.imag)] for v in self.entries.reshape(-1)]}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        try:
            basis = TruncationBasis(int(d["n"]), int(d["N"]))
            vals = np.array([complex(re, im) for re, im in d["entries"]])
            return cls(basis, vals.reshape(len(basis), len(basis)), d.get("source", "external"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"malformed matrix JSON: {exc}") from exc

    def to_binary(self):
        """Raw little-endian interleaved complex128, row-major, plus its JSON header."""
        header = {"n": self.basis.n, "N": self.basis.N, "rows": len(self.basis),
                  "cols": len(self.basis), "format": "c128-rowmajor-le"}
        return header, self.entries.astype("<c16").tobytes(order="C")

    @classmethod
    def from_binary(cls, header, payload):
        if header.get("format") != "c128-rowmajor-le":
            raise ParameterError(f"unsupported matrix format {header.get('format')!r}")
        basis = TruncationBasis(int(header["n"]), int(header["N"]))
        a = np.frombuffer(payload, dtype="<c16")
        if a.size != header["rows"] * header["cols"]:
            raise ParameterError("payload size does not match header")
        return cls(basis, a.reshape(header["rows"], header["cols"]).astype(complex), "binary")


def _source_hash(m: Multiplier) -> str:
    return hashlib.sha256(m.to_json().encode()).hexdigest()[:16]


def _phase(basis):
    return 1j ** (basis.degrees % 4)


def build_matrix(m: Multiplier, basis: TruncationBasis, cubature: Cubature | None = None,
                 order: int | None = None) -> OperatorMatrix:
    """Matrix of ``S_phi`` for the multiplier ``m`` on the given basis."""
    if basis.n != m.n:
        raise ParameterError(f"basis dimension {basis.n} != multiplier dimension {m.n}")
    cub = cubature if cubature is not None else cubature_for(m, basis.N, order)
    # fixed chunk boundaries and an ordered sum keep the result independent of the thread count
    step = max(256, CHUNK_ENTRIES // len(basis))

    def partial(k):
        pts = cub.points[k:k + step]
        psi = psi_matrix(basis, pts)
        mw = m.values(pts) * cub.weights[k:k + step]
        return (psi * mw) @ psi.T

    gram = np.zeros((len(basis), len(basis)), dtype=complex)
    for part in pmap(partial, range(0, cub.size, step), workers=min(max_threads(), 4)):
        gram += part
    ph = _phase(basis)
    S = ph[:, None] * gram * np.conj(ph)[None, :]
    return OperatorMatrix(basis, S, _source_hash(m), order or cub.size)


def identity(basis: TruncationBasis) -> OperatorMatrix:
    return OperatorMatrix(basis, np.eye(len(basis), dtype=complex), "identity")


def _same_basis(a, b):
    if a.basis != b.basis:
        raise ParameterError(f"basis mismatch: {a.basis!r} vs {b.basis!r}")


def apply(S: OperatorMatrix, F: FockVector) -> FockVector:
    _same_basis(S, F)
    return FockVector(S.basis, S.entries @ F.coeffs)


def compose(S1: OperatorMatrix, S2: OperatorMatrix) -> OperatorMatrix:
    """Matrix product ``S1 S2`` (apply ``S2`` first)."""
    _same_basis(S1, S2)
    return OperatorMatrix(S1.basis, S1.entries @ S2.entries, f"({S1.source})*({S2.source})")


def adjoint(S: OperatorMatrix) -> OperatorMatrix:
    return OperatorMatrix(S.basis, S.entries.conj().T, f"adj({S.source})", S.order)


def apply_direct_quadrature(phi, F, z, order: int = 120, scale: float = 0.5) -> complex:
    """``S_phi F(z) = int F(w) exp(z conj w) phi(z - conj w) dlambda(w)`` by brute force.

    One variable only.  ``phi`` and ``F`` are vectorised rules on complex
    arrays (``Symbol`` and ``FockVector`` both qualify).  The Gaussian measure
    is split as ``exp(-scale |w|^2) * exp(-(1 - scale)|w|^2)``: the first
    factor is the Gauss-Hermite weight (nodes stretched accordingly), the
    second stays in the integrand.  Symbols in the Fock space can grow like
    ``exp(|w|^2 / 2)``, and ``scale = 1/2`` keeps the sampled integrand from
    outrunning the rule.
    """
    if order > DIRECT_MAX_ORDER:
        raise ParameterError(f"order {order} exceeds the cost guard {DIRECT_MAX_ORDER}")
    if not 0 < scale <= 1:
        raise ParameterError("scale must lie in (0, 1]")
    z = complex(np.asarray(z, dtype=complex).reshape(-1)[0])
    rule = gauss_hermite(order)
    pts, w = tensor_nodes(rule, 2)
    pts = pts / math.sqrt(scale)
    nodes = pts[:, 0] + 1j * pts[:, 1]
    weights = w / (scale * math.pi)
    # far nodes carry weights below 1e-280; dropping them keeps F inside its overflow guard
    keep = (weights > 1e-280) & (np.abs(nodes) ** 2 < 650.0)
    nodes, weights = nodes[keep], weights[keep]
    wb = np.conj(nodes)
    Fv = fock_eval(F, nodes[:, None]) if isinstance(F, FockVector) else np.asarray(F(nodes[:, None]))
    Fv = np.asarray(Fv, dtype=complex).reshape(-1)
    ph = np.asarray(phi((z - wb)[:, None]), dtype=complex).reshape(-1)
    vals = Fv * ph * np.exp(z * wb - (1 - scale) * np.abs(nodes) ** 2)
    out = complex(np.sum(weights * vals))
    if not np.isfinite(out):
        raise EvaluationError("direct quadrature produced a non-finite value", point=z)
    return out


def operator_norm(S, tol: float = 1e-10, max_iter: int = 5000, seed: int = 0, squarings: int = 40) -> float:
    """Largest singular value by power iteration on ``S^* S``.

    Accepts an :class:`OperatorMatrix` or a plain array.  Truncated singular
    integral operators have many singular values packed just below the norm,
    which stalls plain power iteration; the start vector is therefore taken
    from a normalised high power ``(S^* S)^(2^k)`` built by repeated squaring.
    Iteration stops when the relative change of the estimate drops below
    ``tol``; :class:`ConvergenceError` (with the last estimate) otherwise.
    """
    A = S.entries if isinstance(S, OperatorMatrix) else np.asarray(S, dtype=complex)
    if A.size == 0:
        return 0.0
    AhA = A.conj().T @ A
    scale = np.linalg.norm(AhA)
    if scale == 0.0:
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
    P = AhA / scale
    for _ in range(squarings):
        Q = P @ P
        q = np.linalg.norm(Q)
        if q == 0.0 or not np.isfinite(q):
            break
        Q /= q
        done = np.linalg.norm(Q - P) < 1e-14
        P = Q
        if done:
            break
    u = P @ v
    if np.linalg.norm(u) > 0:
        v = u
    v /= np.linalg.norm(v)
    est = 0.0
    for it in range(max_iter):
        u = AhA @ v
        lam = float(np.real(np.vdot(v, u)))
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return 0.0
        v = u / nu
        new = math.sqrt(max(lam, 0.0))
        if it > 0 and abs(new - est) <= tol * max(new, 1e-300):
            logger.debug("power iteration converged after %d steps", it + 1)
            return new
        est = new
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps", last=est)


def commutator_norm(A, B, max_degree: int | None = None) -> float:
    """``||AB - BA||``; restricted to the leading block when ``max_degree`` is given."""
    _same_basis(A, B)
    C = A.entries @ B.entries - B.entries @ A.entries
    if max_degree is not None:
        k = len(A.basis.block(max_degree))
        C = C[:k, :k]
    return operator_norm(C)


def block_distance(A, B, max_degree: int | None = None) -> float:
    """Spectral norm of the difference of two matrices on their leading block."""
    _same_basis(A, B)
    return operator_norm(A.block(max_degree) - B.block(max_degree))
