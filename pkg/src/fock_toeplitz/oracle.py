"""Independent numerical integration against the Gaussian measure dlambda_alpha.

Nothing here uses the closed-form entry formulas; it only evaluates
integrands at nodes.  Tensor Gauss-Hermite is the primary oracle and Monte
Carlo a second, cruder one.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import core
from .errors import GrowthExceedsWeight
from .symbols import ExponentialSymbol, condition_g

DEFAULT_ORDER = {1: 40, 2: 20}

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Tensor Gauss-Hermite rule on C^n = R^{2n}, normalized for dlambda_alpha.

    ``nodes`` has shape (order**(2n), n) complex; weights sum to one.
    """

    n: int
    alpha: float
    order: int
    nodes: np.ndarray
    weights: np.ndarray


@lru_cache(maxsize=32)
def gauss_hermite_rule(n: int, alpha: float, order: int) -> QuadratureRule:
    if order < 2:
        raise ValueError(f"quadrature order must be >= 2, got {order}")
    t, w = np.polynomial.hermite.hermgauss(order)
    # x = t / sqrt(alpha) maps e^{-t^2} dt / sqrt(pi) onto each real axis of dlambda_alpha
    x = t / math.sqrt(alpha)
    w = w / math.sqrt(math.pi)
    axes = 2 * n
    grid = np.array(list(itertools.product(x, repeat=axes)))
    weights = np.prod(np.array(list(itertools.product(w, repeat=axes))), axis=1)
    nodes = grid[:, :n] + 1j * grid[:, n:]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(n, alpha, order, nodes, weights)


def gaussian_integral(h: Integrand, n: int, alpha: float, order: int) -> complex:
    """Integral of h against dlambda_alpha on C^n."""
    rule = gauss_hermite_rule(n, float(alpha), int(order))
    values = np.asarray(h(rule.nodes), dtype=complex)
    return complex(np.sum(rule.weights * values))


def gaussian_inner(phi: Integrand, psi: Integrand, alpha: float, order: int | None = None,
                   n: int = 1) -> complex:
    """<phi, psi>_alpha = int phi conj(psi) dlambda_alpha by tensor quadrature.

    Exact for polynomial integrands of degree < 2*order in each real axis.
    """
    order = DEFAULT_ORDER.get(n, 12) if order is None else order
    return gaussian_integral(lambda z: phi(z) * np.conj(psi(z)), n, alpha, order)


def mc_inner(phi: Integrand, psi: Integrand, alpha: float, samples: int = 100_000,
             seed: int = 0, n: int = 1) -> tuple[complex, float]:
    """Monte Carlo estimate of <phi, psi>_alpha and its standard error."""
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    rng = np.random.default_rng(seed)
    sd = math.sqrt(1.0 / (2.0 * alpha))
    z = rng.normal(0.0, sd, (samples, n)) + 1j * rng.normal(0.0, sd, (samples, n))
    values = np.asarray(phi(z) * np.conj(psi(z)), dtype=complex)
    mean = complex(np.mean(values))
    spread = float(np.sqrt(np.mean(np.abs(values - mean) ** 2)))
    return mean, spread / math.sqrt(samples)


def basis_function(m: core.MultiIndex, alpha: float) -> Integrand:
    """e_m as a vectorized callable on stacks of points of shape (N, n)."""
    scale = core.basis_scale(m, alpha)
    expo = np.array(m)
    return lambda z: scale * np.prod(z ** expo, axis=-1)


def oracle_entry(symbol: ExponentialSymbol, conjugated: bool, j, k, alpha: float,
                 order: int | None = None) -> complex:
    """<f e_k, e_j> (or <conj(f) e_k, e_j>) by direct quadrature."""
    if not condition_g(symbol, alpha):
        raise GrowthExceedsWeight("symbol grows faster than the Gaussian weight allows")
    j, k = tuple(j), tuple(k)
    ek, ej = basis_function(k, alpha), basis_function(j, alpha)
    if conjugated:
        def phi(z):
            return np.conj(symbol(z)) * ek(z)
    else:
        def phi(z):
            return symbol(z) * ek(z)
    return gaussian_inner(phi, ej, alpha, order, n=symbol.n)


def oracle_translation_entry(a, j, k, alpha: float, order: int | None = None) -> complex:
    """<U_a e_k, e_j> with U_a h(z) = h(z - a) k_a(z), by direct quadrature."""
    a = core.as_point(a)
    ek, ej = basis_function(tuple(k), alpha), basis_function(tuple(j), alpha)
    ka = ExponentialSymbol.normalized_kernel(a, alpha)
    return gaussian_inner(lambda z: ek(z - a) * ka(z), ej, alpha, order, n=a.shape[0])


def oracle_matrix(symbol: ExponentialSymbol, spec: core.BasisSpec, conjugated: bool = False,
                  order: int | None = None) -> np.ndarray:
    """Full matrix of quadrature entries over the truncated basis."""
    if not condition_g(symbol, spec.alpha):
        raise GrowthExceedsWeight("symbol grows faster than the Gaussian weight allows")
    basis = core.enumerate_basis(spec)
    order = DEFAULT_ORDER.get(spec.n, 12) if order is None else order
    rule = gauss_hermite_rule(spec.n, float(spec.alpha), int(order))
    z = rule.nodes
    values = symbol(z)
    if conjugated:
        values = np.conj(values)
    E = np.stack([basis_function(m, spec.alpha)(z) for m in basis])  # (N_basis, N_nodes)
    weighted = rule.weights * values * E  # f e_k at nodes, row k
    return np.conj(E) @ weighted.T
