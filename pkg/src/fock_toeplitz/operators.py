"""Finite-section matrices of Toeplitz operators in the monomial basis.

Every matrix here is an exact compression ``P_M T P_M`` onto polynomials of
total degree <= M.  Rows are output indices j, columns input indices k, both
in graded lexicographic order.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import core
from .core import BasisSpec, as_point
from .errors import ConditionGViolation, DimensionMismatch, NoConvergence
from .series import poly_mul, taylor
from .symbols import ExponentialSymbol, condition_g

logger = logging.getLogger(__name__)

# Entries are accumulated in extended precision and rounded once at the end:
# the translation-identity sums cancel terms ~1e6 times larger than the result at |a| = 1.5.
WORK = np.clongdouble

PROVENANCES = ("analytic", "coanalytic", "product", "translation", "composition", "imported")


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    spec: BasisSpec
    entries: np.ndarray
    provenance: str

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        size = self.spec.size
        if entries.shape != (size, size):
            raise DimensionMismatch(f"expected a {size}x{size} matrix, got {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def basis(self) -> list[core.MultiIndex]:
        return core.enumerate_basis(self.spec)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def adjoint(self) -> "TruncatedOperator":
        return TruncatedOperator(self.spec, self.entries.conj().T, "composition")

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        if self.spec != other.spec:
            raise DimensionMismatch("operators are built on different bases")
        return TruncatedOperator(self.spec, self.entries @ other.entries, "composition")

    def restrict(self, M: int) -> "TruncatedOperator":
        """Compression to degree <= M; the graded order makes it a leading block."""
        if M > self.spec.M:
            raise ValueError(f"cannot restrict degree {self.spec.M} operator to {M}")
        sub = BasisSpec(self.spec.n, self.spec.alpha, M, self.spec.cap)
        size = sub.size
        return TruncatedOperator(sub, self.entries[:size, :size], self.provenance)


def _require_condition_g(f: ExponentialSymbol, spec: BasisSpec) -> None:
    if f.n != spec.n:
        raise DimensionMismatch(f"symbol on C^{f.n} used with a basis on C^{spec.n}")
    alpha = spec.alpha
    if not condition_g(f, alpha):
        raise ConditionGViolation(
            f"symbol grows too fast for alpha={alpha}: alpha*I - H is not positive definite"
        )


def _analytic_entries(f: ExponentialSymbol, spec: BasisSpec) -> np.ndarray:
    basis = core.enumerate_basis(spec)
    index = core.index_map(basis)
    coeffs = taylor(f, spec.M, WORK).coeffs
    out = np.zeros((len(basis), len(basis)), dtype=WORK)
    for col, k in enumerate(basis):
        room = spec.M - core.degree(k)
        for p, c in coeffs.items():
            if core.degree(p) <= room:
                j = core.add(k, p)
                out[index[j], col] = c * core.ratio_scale_ext(j, k, spec.alpha)
    return out


def toeplitz_analytic(f: ExponentialSymbol, spec: BasisSpec) -> TruncatedOperator:
    """Compression of multiplication by holomorphic f: <f e_k, e_j>."""
    _require_condition_g(f, spec)
    return TruncatedOperator(spec, _analytic_entries(f, spec).astype(complex), "analytic")


def toeplitz_coanalytic(g: ExponentialSymbol, spec: BasisSpec) -> TruncatedOperator:
    """Compression of T_{conj g}, the adjoint of the analytic matrix.

    T_{conj g} never raises degree, so the truncated adjoint is exact.
    """
    _require_condition_g(g, spec)
    return TruncatedOperator(spec, _analytic_entries(g, spec).conj().T.astype(complex), "coanalytic")


def product_compression(
    f: ExponentialSymbol, g: ExponentialSymbol, spec: BasisSpec
) -> TruncatedOperator:
    """P_M T_f T_{conj g} P_M.

    Entry (j, k) is sum over m <= min(j, k) of [T_f]_{j,m} conj([T_g]_{k,m}).
    Both factors vanish unless m is dominated by j and k, so contracting the
    degree-M matrices loses nothing.
    """
    _require_condition_g(f, spec)
    _require_condition_g(g, spec)
    F = _analytic_entries(f, spec)
    G = _analytic_entries(g, spec)
    return TruncatedOperator(spec, (F @ G.conj().T).astype(complex), "product")


def translation_unitary(a, spec: BasisSpec) -> TruncatedOperator:
    """Compression of U_a h(z) = h(z - a) k_a(z), expanded column by column."""
    a = as_point(a, spec.n)
    n, alpha = spec.n, spec.alpha
    basis = core.enumerate_basis(spec)
    index = core.index_map(basis)
    kernel = taylor(ExponentialSymbol.normalized_kernel(a, alpha), spec.M, WORK).coeffs
    minus_a = [-WORK(x) for x in a]
    out = np.zeros((len(basis), len(basis)), dtype=WORK)
    for col, k in enumerate(basis):
        # (z - a)**k expanded by the binomial theorem in each coordinate
        shifted: dict[core.MultiIndex, complex] = {(0,) * n: WORK(1)}
        for axis in range(n):
            factor = {
                tuple(p if i == axis else 0 for i in range(n)):
                    math.comb(k[axis], p) * minus_a[axis] ** (k[axis] - p)
                for p in range(k[axis] + 1)
            }
            shifted = poly_mul(shifted, factor, spec.M)
        for j, c in poly_mul(shifted, kernel, spec.M).items():
            out[index[j], col] = c * core.ratio_scale_ext(j, k, alpha)
    return TruncatedOperator(spec, out.astype(complex), "translation")


def _matrix(A) -> np.ndarray:
    return A.entries if isinstance(A, TruncatedOperator) else np.asarray(A, dtype=complex)


KRYLOV_STEPS = 30


def _krylov_ritz(mat: np.ndarray, x: np.ndarray, steps: int) -> tuple[float, np.ndarray]:
    # Rayleigh-Ritz on span{x, Bx, ..., B^(steps-1) x} with B = A^H A;
    # returns the top Ritz value (a lower bound for the norm) and its vector
    basis = [x]
    for _ in range(steps - 1):
        w = mat.conj().T @ (mat @ basis[-1])
        scale = float(np.linalg.norm(w))
        for _ in range(2):
            for q in basis:
                w = w - np.vdot(q, w) * q
        size = float(np.linalg.norm(w))
        if size <= 1e-12 * scale:
            break
        basis.append(w / size)
    Q = np.column_stack(basis)
    _, sv, vh = np.linalg.svd(mat @ Q, full_matrices=False)
    v = Q @ vh[0].conj()
    return float(sv[0]), v / np.linalg.norm(v)


def operator_norm(A, tol: float = 1e-10, max_iter: int = 10_000, method: str = "power") -> float:
    """Largest singular value by restarted power iteration on A^H A.

    Each sweep runs up to 30 power steps, keeps all iterates and restarts
    from the best vector in their span (Rayleigh-Ritz).  On a well separated
    spectrum this is plain power iteration; on the tight singular clusters
    of unitary compressions it avoids stalling short of the top value.
    Starts from the normalized all-ones vector; stops when the relative
    change between sweeps is below ``tol``.  Ritz values never exceed the
    true norm, so an early stop can only undershoot.  ``max_iter`` counts
    products with A^H A.

    ``method="svd"`` is a dense LAPACK SVD, kept for cross-checks.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    mat = _matrix(A)
    if method == "svd":
        return float(np.linalg.svd(mat, compute_uv=False)[0]) if mat.size else 0.0
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    if not np.any(mat):
        return 0.0
    steps = min(KRYLOV_STEPS, mat.shape[1])
    x = np.ones(mat.shape[1], dtype=complex) / math.sqrt(mat.shape[1])
    sigma_old = -1.0
    used = 0
    while used + steps <= max_iter:
        sigma, x = _krylov_ritz(mat, x, steps)
        used += steps
        if abs(sigma - sigma_old) <= tol * sigma:
            logger.debug("power iteration converged after %d products", used)
            return sigma
        sigma_old = sigma
    raise NoConvergence(f"power iteration did not reach tol={tol} in {max_iter} iterations")


def norm_curve(
    f: ExponentialSymbol,
    g: ExponentialSymbol,
    alpha: float,
    M_list: Sequence[int],
    n: int | None = None,
    tol: float = 1e-10,
    method: str = "power",
) -> list[tuple[int, float]]:
    """Compression norms of T_f T_{conj g} for increasing truncation degrees."""
    M_list = list(M_list)
    if not M_list or any(b <= a for a, b in zip(M_list, M_list[1:])):
        raise ValueError(f"M_list must be strictly increasing, got {M_list}")
    n = f.n if n is None else n
    full = product_compression(f, g, BasisSpec(n, alpha, M_list[-1]))
    return [(M, operator_norm(full.restrict(M), tol=tol, method=method)) for M in M_list]


def berezin_numeric(A: TruncatedOperator, z) -> complex:
    """<A k_z, k_z> with k_z truncated to the operator's basis."""
    v = core.normalized_kernel_coeffs(z, A.spec)
    return complex(np.vdot(v, A.entries @ v))


def apply(A: TruncatedOperator, coeffs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (A.shape[1],):
        raise DimensionMismatch(f"vector of shape {coeffs.shape} for a {A.shape} matrix")
    return A.entries @ coeffs
