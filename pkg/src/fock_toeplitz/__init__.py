"""Finite-section numerics for Toeplitz products T_f T_conj(g) on the Fock space."""
from .core import (
    BasisSpec,
    basis_size,
    enumerate_basis,
    kernel_value,
    monomial_norm_sq,
    normalized_kernel_coeffs,
)
from .errors import (
    BasisTooLarge,
    ConditionGViolation,
    DimensionMismatch,
    GrowthExceedsWeight,
    HypothesisViolation,
    NoConvergence,
    NotInSpace,
    SymbolParseError,
)
from .operators import (
    TruncatedOperator,
    apply,
    berezin_numeric,
    norm_curve,
    operator_norm,
    product_compression,
    toeplitz_analytic,
    toeplitz_coanalytic,
    translation_unitary,
)
from .series import TaylorSeries, taylor
from .symbols import (
    BoundednessVerdict,
    ExponentialSymbol,
    QuadraticPolynomial,
    Verdict,
    berezin_symbolic,
    classify_product,
    condition_g,
    evaluate,
    fock_membership,
    fock_p_norm,
    multiply,
    product_kernel,
    real_hessian,
)

__version__ = "0.1.0"
