"""Exponential-polynomial symbols ``scale * z**m0 * exp(q(z))`` with deg q <= 2.

This class is closed under pointwise products and contains every zero-free
element of F^2_alpha, so it is exactly where the boundedness question for
T_f T_{conj g} has a complete answer.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import core
from .core import MultiIndex, as_point
from .errors import DimensionMismatch, HypothesisViolation, NotInSpace

EIGEN_RTOL = 1e-12
CONSTANT_TOL = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class QuadraticPolynomial:
    """q(z) = z^T A z + b . z + c0 with A complex symmetric.

    ``b . z`` is the bilinear sum ``sum b_j z_j`` (no conjugation).
    """

    A: np.ndarray
    b: np.ndarray
    c0: complex = 0j

    def __post_init__(self):
        A = np.array(self.A, dtype=complex)
        b = np.atleast_1d(np.array(self.b, dtype=complex))
        n = b.shape[0]
        A = A.reshape(n, n) if A.size == n * n else A
        if A.shape != (n, n):
            raise DimensionMismatch(f"A has shape {A.shape}, b has length {n}")
        object.__setattr__(self, "A", _frozen(0.5 * (A + A.T)))
        object.__setattr__(self, "b", _frozen(b))
        object.__setattr__(self, "c0", complex(self.c0))

    @classmethod
    def zero(cls, n: int) -> "QuadraticPolynomial":
        return cls(np.zeros((n, n)), np.zeros(n), 0)

    @property
    def n(self) -> int:
        return self.b.shape[0]

    @property
    def degree(self) -> int:
        if np.any(self.A != 0):
            return 2
        if np.any(self.b != 0):
            return 1
        return 0

    def __call__(self, z) -> np.ndarray | complex:
        """Evaluate at a point or at a stack of points (last axis = coordinates)."""
        z = np.asarray(z, dtype=complex)
        if z.ndim == 0:
            z = z.reshape(1)
        quad = np.einsum("...j,jk,...k->...", z, self.A, z)
        val = quad + z @ self.b + self.c0
        return complex(val) if np.ndim(val) == 0 else val

    def __add__(self, other: "QuadraticPolynomial") -> "QuadraticPolynomial":
        if self.n != other.n:
            raise DimensionMismatch(f"cannot add polynomials on C^{self.n} and C^{other.n}")
        return QuadraticPolynomial(self.A + other.A, self.b + other.b, self.c0 + other.c0)

    def __neg__(self) -> "QuadraticPolynomial":
        return QuadraticPolynomial(-self.A, -self.b, -self.c0)

    def allclose(self, other: "QuadraticPolynomial", atol: float = 0.0) -> bool:
        return (
            np.allclose(self.A, other.A, rtol=0, atol=atol)
            and np.allclose(self.b, other.b, rtol=0, atol=atol)
            and abs(self.c0 - other.c0) <= atol
        )


@dataclass(frozen=True, eq=False)
class ExponentialSymbol:
    """f(z) = scale * z**prefactor * exp(q(z)); ``scale == 0`` is the zero symbol."""

    scale: complex
    prefactor: MultiIndex
    q: QuadraticPolynomial

    def __post_init__(self):
        object.__setattr__(self, "scale", complex(self.scale))
        prefactor = tuple(int(k) for k in self.prefactor)
        if len(prefactor) != self.q.n:
            raise DimensionMismatch(
                f"prefactor {prefactor} does not match dimension {self.q.n}"
            )
        if any(k < 0 for k in prefactor):
            raise ValueError(f"prefactor exponents must be >= 0, got {prefactor}")
        object.__setattr__(self, "prefactor", prefactor)

    @classmethod
    def build(cls, A=None, b=None, c0=0, scale=1, prefactor=None, n=None) -> "ExponentialSymbol":
        """Convenience constructor; missing parts default to zero."""
        if n is None:
            if b is not None:
                n = np.atleast_1d(b).shape[0]
            elif A is not None:
                n = np.atleast_2d(A).shape[0]
            elif prefactor is not None:
                n = len(prefactor)
            else:
                n = 1
        A = np.zeros((n, n)) if A is None else np.atleast_2d(np.asarray(A, dtype=complex))
        b = np.zeros(n) if b is None else np.atleast_1d(np.asarray(b, dtype=complex))
        prefactor = (0,) * n if prefactor is None else prefactor
        return cls(scale, prefactor, QuadraticPolynomial(A, b, c0))

    @classmethod
    def constant(cls, c, n: int = 1) -> "ExponentialSymbol":
        return cls.build(scale=c, n=n)

    @classmethod
    def zero(cls, n: int = 1) -> "ExponentialSymbol":
        return cls.build(scale=0, n=n)

    @classmethod
    def kernel(cls, a, alpha: float) -> "ExponentialSymbol":
        """z -> exp(alpha z . conj(a)), the unnormalized kernel K(., a)."""
        a = as_point(a)
        return cls.build(b=alpha * np.conj(a))

    @classmethod
    def normalized_kernel(cls, a, alpha: float) -> "ExponentialSymbol":
        a = as_point(a)
        return cls.build(b=alpha * np.conj(a), c0=-0.5 * alpha * float(np.sum(np.abs(a) ** 2)))

    @property
    def n(self) -> int:
        return self.q.n

    @property
    def is_zero(self) -> bool:
        return self.scale == 0

    @property
    def is_nonvanishing(self) -> bool:
        return not self.is_zero and not any(self.prefactor)

    def is_constant(self, tol: float = CONSTANT_TOL) -> bool:
        """True when the symbol is a constant function (zero included)."""
        if self.is_zero:
            return True
        size = 1.0 + max(np.max(np.abs(self.q.A)), np.max(np.abs(self.q.b)))
        return (
            not any(self.prefactor)
            and np.all(np.abs(self.q.A) <= tol * size)
            and np.all(np.abs(self.q.b) <= tol * size)
        )

    @property
    def constant_value(self) -> complex:
        """scale * exp(c0); the value of the symbol when it is constant."""
        return self.scale * cmath.exp(self.q.c0)

    def __call__(self, z):
        """Evaluate at one point (returns complex) or a stack of points."""
        z = np.asarray(z, dtype=complex)
        single = z.ndim <= 1
        pts = z.reshape(-1, self.n) if single else z
        if pts.shape[-1] != self.n:
            raise DimensionMismatch(f"expected points in C^{self.n}, got {pts.shape}")
        mono = np.prod(pts ** np.array(self.prefactor), axis=-1)
        val = self.scale * mono * np.exp(self.q(pts))
        return complex(val[0]) if single else val

    def log_abs(self, z) -> float:
        """log|f(z)| without forming exp(q(z)); -inf at zeros."""
        z = as_point(z, self.n)
        if self.is_zero:
            return -math.inf
        mono = np.prod(z ** np.array(self.prefactor))
        if mono == 0:
            return -math.inf
        return math.log(abs(self.scale)) + math.log(abs(mono)) + self.q(z).real

    def __mul__(self, other: "ExponentialSymbol") -> "ExponentialSymbol":
        return multiply(self, other)

    def to_dict(self) -> dict:
        def pair(c):
            return [float(c.real), float(c.imag)]

        return {
            "n": self.n,
            "scale": pair(self.scale),
            "prefactor": list(self.prefactor),
            "A": [[pair(x) for x in row] for row in self.q.A],
            "b": [pair(x) for x in self.q.b],
            "c0": pair(self.q.c0),
        }


def evaluate(f: ExponentialSymbol, z) -> complex:
    return f(as_point(z, f.n))


def multiply(f: ExponentialSymbol, g: ExponentialSymbol) -> ExponentialSymbol:
    if f.n != g.n:
        raise DimensionMismatch(f"symbols live on C^{f.n} and C^{g.n}")
    if f.is_zero or g.is_zero:
        return ExponentialSymbol.zero(f.n)
    return ExponentialSymbol(
        f.scale * g.scale, core.add(f.prefactor, g.prefactor), f.q + g.q
    )


def real_hessian(q: QuadraticPolynomial) -> np.ndarray:
    """Real symmetric H with Re q2(x + iy) = (x, y)^T H (x, y)."""
    re, im = q.A.real, q.A.imag
    return np.block([[re, -im], [-im, -re]])


def _min_margin(f: ExponentialSymbol, level: float) -> tuple[float, float]:
    H = real_hessian(f.q)
    shifted = level * np.eye(H.shape[0]) - H
    return float(np.linalg.eigvalsh(shifted)[0]), float(np.linalg.norm(H, 2))


def fock_membership(f: ExponentialSymbol, alpha: float) -> bool:
    """Whether f lies in F^p_alpha.

    Only the quadratic part matters and the answer does not depend on p:
    |f|^p e^{-p alpha |z|^2 / 2} is integrable iff (alpha/2) I - H is
    positive definite.  The boundary case is reported as not a member.
    """
    if f.is_zero:
        return True
    smallest, hnorm = _min_margin(f, 0.5 * alpha)
    return smallest > EIGEN_RTOL * (1.0 + hnorm)


def condition_g(f: ExponentialSymbol, alpha: float) -> bool:
    """Whether f(z) e^{alpha z . conj(w)} is dlambda_alpha-integrable for all w."""
    if f.is_zero:
        return True
    smallest, hnorm = _min_margin(f, alpha)
    return smallest > EIGEN_RTOL * (1.0 + hnorm)


class Verdict(enum.Enum):
    ZERO_OPERATOR = "ZeroOperator"
    BOUNDED_UNITARY_MULTIPLE = "BoundedUnitaryMultiple"
    UNBOUNDED_QUADRATIC = "UnboundedQuadratic"
    UNBOUNDED_NONCONSTANT_PRODUCT = "UnboundedNonconstantProduct"


@dataclass(frozen=True, eq=False)
class BoundednessVerdict:
    tag: Verdict
    gamma: complex | None = None
    translation: np.ndarray | None = None
    witness: tuple[np.ndarray, np.ndarray] | None = None
    witness_value: complex | None = None
    product: ExponentialSymbol | None = field(default=None, repr=False)

    @property
    def bounded(self) -> bool:
        return self.tag in (Verdict.ZERO_OPERATOR, Verdict.BOUNDED_UNITARY_MULTIPLE)

    def to_dict(self) -> dict:
        def pair(c):
            # + 0.0 folds -0.0 into 0.0 for stable reports
            return [float(c.real) + 0.0, float(c.imag) + 0.0]

        out: dict = {"verdict": self.tag.value}
        if self.gamma is not None:
            out["gamma"] = pair(self.gamma)
            out["abs_gamma"] = abs(self.gamma)
        if self.translation is not None:
            out["a"] = [pair(x) for x in self.translation]
        if self.witness is not None:
            u, v = self.witness
            out["witness"] = {"u": [pair(x) for x in u], "v": [pair(x) for x in v],
                              "re_Auv": float(self.witness_value.real)}
        return out


def bilinear(x, y) -> complex:
    """<x, y> = sum x_j y_j (no conjugation)."""
    return complex(np.sum(np.asarray(x) * np.asarray(y)))


def find_witness(A: np.ndarray, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Points u, v with Re <Au, v> != 0 for a nonzero symmetric A."""
    n = A.shape[0]
    eye = np.eye(n, dtype=complex)
    for phase in (1, 1j):
        for j in range(n):
            for k in range(n):
                u, v = eye[j], phase * eye[k]
                if bilinear(A @ u, v).real != 0:
                    return u, v
    # unreachable for A != 0 since <Au, iv> = i <Au, v>
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        if bilinear(A @ u, v).real != 0:
            return u, v
    raise ValueError("no witness found; is A zero?")


def classify_product(
    f: ExponentialSymbol, g: ExponentialSymbol, alpha: float, seed: int = 0
) -> BoundednessVerdict:
    """Decide whether T_f T_{conj g} is bounded on F^2_alpha, with a certificate."""
    if f.n != g.n:
        raise DimensionMismatch(f"symbols live on C^{f.n} and C^{g.n}")
    if f.is_zero or g.is_zero:
        return BoundednessVerdict(Verdict.ZERO_OPERATOR, gamma=0j)
    for name, s in (("f", f), ("g", g)):
        if not fock_membership(s, alpha):
            raise HypothesisViolation(
                f"{name} is not in F^2_alpha (alpha={alpha}): (alpha/2)I - H is not positive definite"
            )
    fg = multiply(f, g)
    if not fg.is_constant():
        return BoundednessVerdict(Verdict.UNBOUNDED_NONCONSTANT_PRODUCT, product=fg)
    if f.q.degree == 2:
        u, v = find_witness(f.q.A, seed=seed)
        return BoundednessVerdict(
            Verdict.UNBOUNDED_QUADRATIC, witness=(u, v),
            witness_value=bilinear(f.q.A @ u, v), product=fg,
        )
    a = np.conj(f.q.b) / alpha
    scale_f = f.scale * cmath.exp(f.q.c0)
    scale_g = g.scale * cmath.exp(g.q.c0)
    gamma = scale_f * np.conj(scale_g) * math.exp(0.5 * alpha * float(np.sum(np.abs(a) ** 2)))
    return BoundednessVerdict(
        Verdict.BOUNDED_UNITARY_MULTIPLE, gamma=complex(gamma), translation=a, product=fg
    )


def berezin_symbolic(f: ExponentialSymbol, g: ExponentialSymbol, z) -> complex:
    """Berezin transform of T_f T_{conj g}: f(z) conj(g(z))."""
    return evaluate(f, z) * np.conj(evaluate(g, z))


def _kernel_exponent(z, w, alpha: float) -> complex:
    return (
        -0.5 * alpha * float(np.sum(np.abs(z) ** 2))
        + alpha * core.dot_conj(w, z)
        - 0.5 * alpha * float(np.sum(np.abs(w) ** 2))
    )


def product_kernel(f: ExponentialSymbol, g: ExponentialSymbol, z, w, alpha: float) -> complex:
    """<T_f T_{conj g} k_z, k_w>."""
    z, w = as_point(z, f.n), as_point(w, f.n)
    return evaluate(f, w) * np.conj(evaluate(g, z)) * cmath.exp(_kernel_exponent(z, w, alpha))


def log_abs_product_kernel(f, g, z, w, alpha: float) -> float:
    """log|T(z, w)| from the same formula, evaluated in log space."""
    z, w = as_point(z, f.n), as_point(w, f.n)
    return f.log_abs(w) + g.log_abs(z) + _kernel_exponent(z, w, alpha).real


def modulus_identity(f, g, z, w, alpha: float) -> float:
    """|f(w) g(z)| exp(-alpha |z - w|^2 / 2), which equals |T(z, w)|."""
    z, w = as_point(z, f.n), as_point(w, f.n)
    return abs(evaluate(f, w) * evaluate(g, z)) * math.exp(-0.5 * alpha * float(np.sum(np.abs(z - w) ** 2)))


def gaussian_p_norm_closed_form(f: ExponentialSymbol, p: float, alpha: float) -> float | None:
    """Closed-form F^p norm for scale * exp(b . z + c0); None outside that case."""
    if f.is_zero:
        return 0.0
    if any(f.prefactor) or f.q.degree == 2:
        return None
    bsq = float(np.sum(np.abs(f.q.b) ** 2))
    return abs(f.scale) * math.exp(f.q.c0.real + bsq / (2.0 * alpha))


def fock_p_norm(
    f: ExponentialSymbol, p: float, alpha: float, method: str = "auto", order: int | None = None
) -> float:
    """Norm of f in F^p_alpha.

    ``||f||_p^p`` is the dlambda_{p alpha / 2}-integral of ``|f|^p``, so the
    oracle's Gauss-Hermite rule applies directly.  ``method`` is one of
    ``"auto"`` (closed form when available), ``"closed"`` or ``"quadrature"``.
    """
    if not 0 < p < math.inf:
        raise ValueError(f"p must be in (0, inf), got {p}")
    if not fock_membership(f, alpha):
        raise NotInSpace(f"symbol is not in F^{p}_{alpha}")
    if method in ("auto", "closed"):
        closed = gaussian_p_norm_closed_form(f, p, alpha)
        if closed is not None:
            return closed
        if method == "closed":
            raise ValueError("no closed form for symbols with a quadratic part or monomial prefactor")
    elif method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    from .oracle import DEFAULT_ORDER, gaussian_integral

    beta = 0.5 * p * alpha
    if order is None:
        order = DEFAULT_ORDER.get(f.n, 12)
    integral = gaussian_integral(lambda z: np.abs(f(z)) ** p, f.n, beta, order)
    return float(integral.real) ** (1.0 / p)
