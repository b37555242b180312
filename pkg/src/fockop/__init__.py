"""Convolution-type singular integral operators on the Fock space F^2(C^n).

Converts between bounded Fourier multipliers and entire symbols, builds
truncated matrices of the operators, and checks their operator-theoretic
properties numerically.
"""
from . import parallel  # noqa: F401  (applies FOCK_THREADS before numpy loads)
from .errors import ConvergenceError, DomainError, EvaluationError, FockError, ParameterError
from .quad import Cubature, QuadratureRule, gauss_hermite, integrate_fock_measure, integrate_weighted_Rn
from .hermite import FockVector, HermiteVector, TruncationBasis, fock_eval, psi_eval, reproducing_kernel, weyl_apply
from .bargmann import bargmann_basis, bargmann_point, inverse_bargmann_basis, inverse_bargmann_point, rotate_fock
from .multiplier import GridSpec, Multiplier, essential_range, from_spec, grid_multiplier, indicator, \
    named_multiplier, sup_norm
from .symbol import Symbol, multiplier_from_symbol_coeffs, multiplier_from_symbol_integral, symbol_coeffs, \
    symbol_from_multiplier, symbol_point
from .operator import OperatorMatrix, adjoint, apply, build_matrix, commutator_norm, compose, identity, \
    operator_norm
from .spectral import SpectrumReport, compactness_probe, hermitian_eigs, reducing_projection, spectrum_estimate
from .gallery import NamedOperator, antiderivative_A, beurling_suite, counterexample_suite, gaussian_pair, \
    hilbert_symbol, modulation_pair, riesz_suite

__version__ = "0.1.0"
