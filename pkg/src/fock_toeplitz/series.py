"""Exact truncated Taylor expansions of ``scale * z**m0 * exp(q(z))``."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Mapping

from . import core
from .core import MultiIndex
from .symbols import ExponentialSymbol, QuadraticPolynomial


@dataclass(frozen=True)
class TaylorSeries:
    """Coefficients of z**m for every |m| <= degree; missing keys are zero."""

    n: int
    degree: int
    coeffs: Mapping[MultiIndex, complex]

    def __getitem__(self, m: MultiIndex) -> complex:
        return self.coeffs.get(tuple(m), 0j)

    def __call__(self, z) -> complex:
        z = core.as_point(z, self.n)
        total = 0j
        for m, c in self.coeffs.items():
            term = c
            for zj, k in zip(z, m):
                term *= zj**k
            total += term
        return total


def _unit(n: int, j: int) -> MultiIndex:
    return tuple(1 if i == j else 0 for i in range(n))


def polynomial_terms(q: QuadraticPolynomial) -> dict[MultiIndex, complex]:
    """Nonconstant monomial coefficients of q."""
    n = q.n
    terms: dict[MultiIndex, complex] = {}
    for j in range(n):
        if q.b[j] != 0:
            terms[_unit(n, j)] = complex(q.b[j])
        for k in range(j, n):
            coef = q.A[j, k] if j == k else 2 * q.A[j, k]
            if coef != 0:
                m = core.add(_unit(n, j), _unit(n, k))
                terms[m] = terms.get(m, 0j) + complex(coef)
    return terms


def exp_series(
    q: QuadraticPolynomial, D: int, dtype: Callable = complex
) -> dict[MultiIndex, complex]:
    """Coefficients of exp(q) through total degree D.

    Applying the Euler operator sum z_j d/dz_j to E = exp(q) gives
    |m| E_m = sum_p |p| q_p E_{m-p}, a recurrence over the few monomials of q.
    ``dtype`` is the scalar type used for the recurrence (e.g. np.clongdouble).
    """
    n = q.n
    terms = [(p, core.degree(p) * dtype(c)) for p, c in polynomial_terms(q).items()]
    out: dict[MultiIndex, complex] = {}
    if D < 0:
        return out
    out[(0,) * n] = dtype(cmath.exp(q.c0))
    for m in core._graded_indices(n, D)[1:]:
        acc = dtype(0)
        for p, weighted in terms:
            if core.dominates(m, p):
                prev = out.get(core.sub(m, p))
                if prev:
                    acc += weighted * prev
        if acc != 0:
            out[m] = acc / core.degree(m)
    return out


def taylor(f: ExponentialSymbol, D: int, dtype: Callable = complex) -> TaylorSeries:
    if D < 0:
        raise ValueError(f"degree must be >= 0, got {D}")
    if f.is_zero:
        return TaylorSeries(f.n, D, {})
    shift = f.prefactor
    base = exp_series(f.q, D - core.degree(shift), dtype)
    scale = dtype(f.scale)
    coeffs = {core.add(m, shift): scale * c for m, c in base.items()}
    return TaylorSeries(f.n, D, coeffs)


def poly_mul(
    a: Mapping[MultiIndex, complex], b: Mapping[MultiIndex, complex], D: int
) -> dict[MultiIndex, complex]:
    """Product of two sparse polynomials, dropping terms above degree D."""
    out: dict[MultiIndex, complex] = {}
    for ma, ca in a.items():
        da = core.degree(ma)
        for mb, cb in b.items():
            if da + core.degree(mb) <= D:
                m = core.add(ma, mb)
                out[m] = out.get(m, 0j) + ca * cb
    return out
