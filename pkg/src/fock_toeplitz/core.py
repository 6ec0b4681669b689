"""Multi-indices, the monomial orthonormal basis of F^2_alpha and kernel primitives.

A multi-index is a plain tuple of nonnegative ints.  The orthonormal basis
element attached to ``m`` is ``e_m(z) = sqrt(alpha**|m| / m!) * z**m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Tuple

import numpy as np

from .errors import BasisTooLarge, DimensionMismatch

MultiIndex = Tuple[int, ...]

DEFAULT_BASIS_CAP = 10_000
# below this |m| log-factorials come from exact integers rather than lgamma
EXACT_FACTORIAL_LIMIT = 20


@dataclass(frozen=True)
class BasisSpec:
    """Dimension ``n``, weight ``alpha`` and truncation degree ``M``."""

    n: int = 1
    alpha: float = 1.0
    M: int = 40
    cap: int = DEFAULT_BASIS_CAP

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"dimension must be positive, got {self.n}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.M < 0:
            raise ValueError(f"truncation degree must be >= 0, got {self.M}")

    @property
    def size(self) -> int:
        return basis_size(self.n, self.M)

    def basis(self) -> list[MultiIndex]:
        return enumerate_basis(self)

    def to_dict(self) -> dict:
        return {"n": self.n, "alpha": self.alpha, "M": self.M}


def basis_size(n: int, M: int) -> int:
    return math.comb(M + n, n)


def degree(m: Sequence[int]) -> int:
    return sum(m)


def dominates(j: Sequence[int], k: Sequence[int]) -> bool:
    """Componentwise order ``j >= k``."""
    return all(a >= b for a, b in zip(j, k))


def sub(j: Sequence[int], k: Sequence[int]) -> MultiIndex:
    return tuple(a - b for a, b in zip(j, k))


def add(j: Sequence[int], k: Sequence[int]) -> MultiIndex:
    return tuple(a + b for a, b in zip(j, k))


def _compositions(d: int, n: int) -> Iterator[MultiIndex]:
    # lexicographically descending, so (1,0) precedes (0,1)
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


@lru_cache(maxsize=64)
def _graded_indices(n: int, M: int) -> tuple[MultiIndex, ...]:
    return tuple(m for d in range(M + 1) for m in _compositions(d, n))


def enumerate_basis(spec: BasisSpec) -> list[MultiIndex]:
    """All multi-indices of total degree <= M in graded lexicographic order."""
    size = basis_size(spec.n, spec.M)
    if size > spec.cap:
        raise BasisTooLarge(
            f"basis of C({spec.M}+{spec.n},{spec.n}) = {size} indices exceeds cap {spec.cap}"
        )
    return list(_graded_indices(spec.n, spec.M))


def index_map(basis: Sequence[MultiIndex]) -> dict[MultiIndex, int]:
    return {m: i for i, m in enumerate(basis)}


def exponent_array(basis: Sequence[MultiIndex]) -> np.ndarray:
    return np.array(basis, dtype=np.int64).reshape(len(basis), -1)


@lru_cache(maxsize=1024)
def _factorial(k: int) -> int:
    return math.factorial(k)


def multi_factorial(m: Sequence[int]) -> int:
    """m! = prod m_j!, exact."""
    return math.prod(_factorial(k) for k in m)


def _log_factorial_int(k: int) -> float:
    if k <= EXACT_FACTORIAL_LIMIT:
        return math.log(_factorial(k))
    return math.lgamma(k + 1)


def log_factorial(m: Sequence[int]) -> float:
    """log(m!) with m! = prod m_j!."""
    if degree(m) <= EXACT_FACTORIAL_LIMIT:
        return math.log(multi_factorial(m))
    return sum(_log_factorial_int(k) for k in m)


def _exact_ratio(num: int, den: int) -> float | None:
    # correctly rounded num/den, or None when it leaves the normal double range
    try:
        value = num / den
    except OverflowError:
        return None
    return value if value > 1e-300 else None


def monomial_norm_sq(m: Sequence[int], alpha: float) -> float:
    """Squared F^2_alpha norm of z**m, equal to m! / alpha**|m|."""
    d = degree(m)
    if d <= EXACT_FACTORIAL_LIMIT:
        return multi_factorial(m) / alpha**d
    fact = _exact_ratio(multi_factorial(m), 1)
    if fact is not None:
        value = fact / alpha**d
        if math.isfinite(value) and value > 0:
            return value
    return math.exp(log_factorial(m) - d * math.log(alpha))


def basis_scale(m: Sequence[int], alpha: float) -> float:
    """Coefficient turning z**m into the unit vector e_m."""
    return 1.0 / math.sqrt(monomial_norm_sq(m, alpha))


def ratio_scale(j: Sequence[int], k: Sequence[int], alpha: float) -> float:
    """sqrt(j!/k!) * alpha**((|k|-|j|)/2).

    The factorial ratio is formed exactly and rounded once; the log-space
    route carries an error of about |log ratio| ulps and is kept for overflow.
    """
    ratio = _exact_ratio(multi_factorial(j), multi_factorial(k))
    if ratio is not None:
        value = math.sqrt(ratio) * alpha ** (0.5 * (degree(k) - degree(j)))
        if math.isfinite(value) and value > 0:
            return value
    return math.exp(
        0.5 * (log_factorial(j) - log_factorial(k) + (degree(k) - degree(j)) * math.log(alpha))
    )


def ratio_scale_ext(j: Sequence[int], k: Sequence[int], alpha: float) -> np.longdouble:
    """:func:`ratio_scale` in extended precision."""
    num, den = multi_factorial(j), multi_factorial(k)
    common = math.gcd(num, den)
    ratio = np.longdouble(num // common) / np.longdouble(den // common)
    power = np.longdouble(degree(k) - degree(j)) / 2
    return np.sqrt(ratio) * np.longdouble(alpha) ** power


def as_point(z, n: int | None = None) -> np.ndarray:
    """Coerce a scalar or sequence to a 1-D complex coordinate vector."""
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.ndim != 1:
        raise DimensionMismatch(f"a point must be 1-D, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(f"expected a point in C^{n}, got C^{arr.shape[0]}")
    return arr


def dot_conj(z, w) -> complex:
    """z . conj(w) = sum z_j conj(w_j)."""
    z, w = as_point(z), as_point(w)
    if z.shape != w.shape:
        raise DimensionMismatch(f"dimension mismatch: {z.shape[0]} vs {w.shape[0]}")
    return complex(np.sum(z * np.conj(w)))


def kernel_value(z, w, alpha: float) -> complex:
    """Reproducing kernel K(z, w) = exp(alpha z . conj(w))."""
    return complex(np.exp(alpha * dot_conj(z, w)))


def normalized_kernel_coeffs(z, spec: BasisSpec) -> np.ndarray:
    """Coordinates of k_z in the truncated orthonormal basis."""
    z = as_point(z, spec.n)
    basis = enumerate_basis(spec)
    expo = exponent_array(basis)
    scales = np.array([basis_scale(m, spec.alpha) for m in basis])
    powers = np.prod(np.conj(z)[None, :] ** expo, axis=1)
    return np.exp(-0.5 * spec.alpha * float(np.sum(np.abs(z) ** 2))) * scales * powers
