import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fock_toeplitz import core, operators, oracle, symbols
from fock_toeplitz.core import BasisSpec
from fock_toeplitz.errors import ConditionGViolation, DimensionMismatch, NoConvergence
from fock_toeplitz.operators import (
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
from fock_toeplitz.symbols import ExponentialSymbol as S

from .helpers import complex_points

SPEC40 = BasisSpec(1, 1.0, 40)
# frozen compression norms of T_f T_conj(g), f = exp(0.2 z^2), g = exp(-0.2 z^2), alpha = 1;
# computed once by a 40-digit mpmath SVD of the exact finite-sum entries
QUADRATIC_PAIR_GOLDEN = {
    10: 1.6877699512751180,
    20: 3.2551655042146406,
    30: 6.3360968990471771,
    40: 12.280143390057586,
}
ORACLE_SYMBOLS = [S.constant(1), S.build(prefactor=(1,)), S.build(b=1), S.build(A=0.2),
                  S.build(prefactor=(1,), b=1), S.build(A=-0.1j, b=0.5 - 0.5j, scale=0.7)]


def test_analytic_identity():
    assert np.array_equal(toeplitz_analytic(S.constant(1), SPEC40).entries, np.eye(41))


def test_analytic_exp_entries():
    T = toeplitz_analytic(S.build(b=1), BasisSpec(1, 1.0, 8)).entries
    assert T[1, 0] == pytest.approx(1)
    assert T[2, 0] == pytest.approx(math.sqrt(2) / 2)
    assert oracle.oracle_entry(S.build(b=1), False, (2,), (0,), 1.0) == pytest.approx(0.7071067811865476, abs=1e-12)


def test_analytic_z_is_creation():
    T = toeplitz_analytic(S.build(prefactor=(1,)), BasisSpec(1, 1.0, 10)).entries
    expected = np.diag(np.sqrt(np.arange(1, 11)), -1)
    assert np.allclose(T, expected, atol=1e-15)


def test_coanalytic_zbar_is_annihilation():
    T = toeplitz_coanalytic(S.build(prefactor=(1,)), BasisSpec(1, 1.0, 10)).entries
    assert np.allclose(T, np.diag(np.sqrt(np.arange(1, 11)), 1), atol=1e-15)
    assert oracle.oracle_entry(S.build(prefactor=(1,)), True, (0,), (1,), 1.0) == pytest.approx(1, abs=1e-12)


def test_coanalytic_constant():
    c = 2 - 3j
    T = toeplitz_coanalytic(S.constant(c, n=2), BasisSpec(2, 1.0, 3)).entries
    with pytest.raises(DimensionMismatch):
        toeplitz_coanalytic(S.constant(c), BasisSpec(2, 1.0, 3))
    assert np.array_equal(T, np.conj(c) * np.eye(10))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("f", ORACLE_SYMBOLS)
def test_entries_match_quadrature(f, alpha):
    spec = BasisSpec(1, alpha, 8)
    ana = toeplitz_analytic(f, spec).entries
    co = toeplitz_coanalytic(f, spec).entries
    assert np.array_equal(co, ana.conj().T)
    assert np.max(np.abs(ana - oracle.oracle_matrix(f, spec))) < 1e-8
    assert np.max(np.abs(co - oracle.oracle_matrix(f, spec, conjugated=True))) < 1e-8


def test_entries_match_quadrature_two_dimensions():
    spec = BasisSpec(2, 1.0, 4)
    f = S.build(A=[[0.1, 0.05j], [0.05j, -0.1]], b=[0.5, -0.3j], prefactor=(1, 0))
    ana = toeplitz_analytic(f, spec).entries
    assert np.max(np.abs(ana - oracle.oracle_matrix(f, spec, order=20))) < 1e-8


@pytest.mark.parametrize("n, M", [(1, 12), (2, 6)])
def test_degree_raising_sparsity(n, M):
    spec = BasisSpec(n, 1.3, M)
    f = S.build(A=0.1 * np.eye(n), b=np.ones(n), prefactor=(1,) + (0,) * (n - 1))
    ana = toeplitz_analytic(f, spec).entries
    co = toeplitz_coanalytic(f, spec).entries
    basis = spec.basis()
    for r, j in enumerate(basis):
        for c, k in enumerate(basis):
            if not core.dominates(j, k):
                assert ana[r, c] == 0
            if not core.dominates(k, j):
                assert co[r, c] == 0


def test_condition_g_enforced():
    with pytest.raises(ConditionGViolation):
        toeplitz_analytic(S.build(A=1.2), SPEC40)
    with pytest.raises(ConditionGViolation):
        product_compression(S.constant(1), S.build(A=-1.5), SPEC40)
    # the growth condition is weaker than membership
    toeplitz_analytic(S.build(A=0.8), BasisSpec(1, 1.0, 5))


def test_coanalytic_eigen_identity():
    g = S.build(b=-1)
    T = toeplitz_coanalytic(g, SPEC40)
    rng = np.random.default_rng(3)
    for z in list(complex_points(rng, 20, 2.0)[:, 0]) + [2.0, -2j]:
        v = core.normalized_kernel_coeffs(z, SPEC40)
        resid = apply(T, v) - np.conj(symbols.evaluate(g, z)) * v
        assert np.linalg.norm(resid) < 1e-8


def test_product_identity_and_corner():
    assert np.array_equal(product_compression(S.constant(1), S.constant(1), SPEC40).entries, np.eye(41))
    P = product_compression(S.build(A=0.2), S.build(A=-0.2), SPEC40)
    assert P.entries[0, 0] == pytest.approx(1, abs=1e-15)


def test_product_matches_oracle_composition():
    # oracle side: quadrature entries of T_f, T_conj(g) contracted over the common lower set
    spec = BasisSpec(1, 1.0, 8)
    f, g = S.build(A=0.2, b=0.3), S.build(b=-0.5j, prefactor=(1,))
    F = oracle.oracle_matrix(f, spec)
    G = oracle.oracle_matrix(g, spec, conjugated=True)
    assert np.max(np.abs(product_compression(f, g, spec).entries - F @ G)) < 1e-8


@settings(max_examples=15, deadline=None)
@given(x=st.floats(-1.06, 1.06), y=st.floats(-1.06, 1.06))
def test_translation_identity(x, y):
    a = complex(x, y)
    f, g = S.kernel(a, 1.0), S.build(b=-np.conj(a))
    gamma = math.exp(0.5 * abs(a) ** 2)
    P = product_compression(f, g, SPEC40).entries
    U = translation_unitary(a, SPEC40).entries
    assert np.max(np.abs(P - gamma * U)) <= 1e-10


def test_translation_identity_two_dimensions():
    a, alpha = np.array([0.5 - 0.2j, 0.3j]), 0.8
    spec = BasisSpec(2, alpha, 12)
    f, g = S.kernel(a, alpha), S.build(b=-alpha * np.conj(a))
    gamma = math.exp(0.5 * alpha * np.sum(np.abs(a) ** 2))
    P = product_compression(f, g, spec).entries
    U = translation_unitary(a, spec).entries
    assert np.max(np.abs(P - gamma * U)) <= 1e-12


def test_translation_examples():
    assert np.allclose(translation_unitary(0, SPEC40).entries, np.eye(41), atol=0)
    U = translation_unitary(1, SPEC40)
    assert U.entries[0, 0] == pytest.approx(math.exp(-0.5), rel=1e-15)
    assert np.linalg.norm(U.entries[:, 0]) == pytest.approx(1, abs=1e-12)
    assert np.all(np.linalg.norm(U.entries, axis=0) <= 1 + 1e-12)


def test_translation_entries_match_quadrature():
    spec = BasisSpec(1, 1.0, 6)
    a = 0.6 - 0.3j
    U = translation_unitary(a, spec).entries
    for j in range(7):
        for k in range(7):
            assert U[j, k] == pytest.approx(oracle.oracle_translation_entry(a, (j,), (k,), 1.0), abs=1e-10)


def test_translation_is_unitary_on_low_degrees():
    U = translation_unitary(0.8j, SPEC40).entries
    gram = U.conj().T @ U
    assert np.max(np.abs(gram[:15, :15] - np.eye(15))) < 1e-8


def test_operator_norm_examples():
    assert operator_norm(np.eye(5)) == pytest.approx(1)
    assert operator_norm(np.diag([1.0, 2.0, 3.0])) == pytest.approx(3, rel=1e-9)
    assert operator_norm(np.zeros((3, 3))) == 0
    assert operator_norm(np.diag([1.0, 2.0, 3.0]), method="svd") == pytest.approx(3, rel=1e-15)
    with pytest.raises(ValueError):
        operator_norm(np.eye(2), method="lanczos")
    with pytest.raises(ValueError):
        operator_norm(np.eye(2), tol=0)
    with pytest.raises(NoConvergence):
        operator_norm(np.diag([1.0, 0.999]), max_iter=3)
    with pytest.raises(NoConvergence):
        operator_norm(np.random.default_rng(0).normal(size=(40, 40)), max_iter=29)


@given(st.integers(0, 10_000))
def test_operator_norm_matches_svd(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[1] > 0.99 * sv[0]:
        return
    assert operator_norm(A, tol=1e-13) == pytest.approx(sv[0], rel=1e-8)


def test_translation_pair_norm_close_to_gamma():
    P = product_compression(S.build(b=1), S.build(b=-1), SPEC40)
    norm = operator_norm(P)
    assert abs(norm - math.exp(0.5)) <= 1e-12
    assert norm <= math.exp(0.5) + 1e-9


@pytest.mark.parametrize("a", [1.0, 1.06 + 1.06j, -1.5j])
def test_translation_pair_norm_up_to_radius_one_and_a_half(a):
    P = product_compression(S.kernel(a, 1.0), S.build(b=-np.conj(a)), SPEC40)
    assert operator_norm(P) == pytest.approx(math.exp(0.5 * abs(a) ** 2), rel=1e-12)


def test_norm_curve_examples():
    ms = [5, 10, 20, 40]
    exact = [x for _, x in norm_curve(S.build(b=1), S.build(b=-1), 1.0, ms, method="svd")]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(exact, exact[1:]))
    power = [x for _, x in norm_curve(S.build(b=1), S.build(b=-1), 1.0, ms)]
    # tight singular cluster: the Ritz pass has to recover what power iteration misses
    assert power == pytest.approx(exact, rel=1e-12)
    assert max(exact + power) <= math.exp(0.5) + 1e-9
    assert [x for _, x in norm_curve(S.constant(1), S.constant(1), 1.0, [1, 5, 9])] == pytest.approx([1, 1, 1])
    with pytest.raises(ValueError):
        norm_curve(S.constant(1), S.constant(1), 1.0, [5, 5])


def test_norm_curve_quadratic_pair_golden():
    curve = dict(norm_curve(S.build(A=0.2), S.build(A=-0.2), 1.0, [10, 20, 30, 40]))
    for M, golden in QUADRATIC_PAIR_GOLDEN.items():
        assert curve[M] == pytest.approx(golden, rel=1e-12)
    assert curve[40] / curve[10] > 1.5


def test_quadratic_pair_golden_independent_check():
    # the frozen values equal dense SVD norms of the compression
    P = product_compression(S.build(A=0.2), S.build(A=-0.2), SPEC40)
    for M, golden in QUADRATIC_PAIR_GOLDEN.items():
        assert np.linalg.svd(P.restrict(M).entries, compute_uv=False)[0] == pytest.approx(golden, rel=1e-12)


@settings(max_examples=10, deadline=None)
@given(a=st.complex_numbers(max_magnitude=0.45), b1=st.complex_numbers(max_magnitude=1),
       b2=st.complex_numbers(max_magnitude=1))
def test_norm_curve_nondecreasing(a, b1, b2):
    f, g = S.build(A=a, b=b1), S.build(A=-a, b=b2)
    norms = [x for _, x in norm_curve(f, g, 1.0, [4, 8, 16, 24], method="svd")]
    assert all(y >= x * (1 - 1e-12) for x, y in zip(norms, norms[1:]))
    power = [x for _, x in norm_curve(f, g, 1.0, [4, 8, 16, 24])]
    assert power == pytest.approx(norms, rel=1e-10)


def test_berezin_numeric():
    v = core.normalized_kernel_coeffs(1.5, BasisSpec(1, 1.0, 5))
    I5 = TruncatedOperator(BasisSpec(1, 1.0, 5), np.eye(6), "composition")
    assert berezin_numeric(I5, 1.5) == pytest.approx(np.sum(np.abs(v) ** 2))
    assert 0 < berezin_numeric(I5, 1.5).real < 1
    f, g = S.build(b=1), S.build(b=-1)
    P = product_compression(f, g, SPEC40)
    assert berezin_numeric(P, 0.5) == pytest.approx(symbols.berezin_symbolic(f, g, 0.5), abs=1e-6)
    assert berezin_numeric(P, 1j) == pytest.approx(cmath.exp(2j), abs=1e-6)


def test_apply_translation_of_kernel():
    rng = np.random.default_rng(11)
    for a, z in zip(complex_points(rng, 5, 1.0)[:, 0], complex_points(rng, 5, 1.0)[:, 0]):
        U = translation_unitary(a, SPEC40)
        # U_a k_z = exp(i alpha Im(z conj(a))) k_{z+a}
        expected = cmath.exp(1j * (z * np.conj(a)).imag) * core.normalized_kernel_coeffs(z + a, SPEC40)
        got = apply(U, core.normalized_kernel_coeffs(z, SPEC40))
        assert np.max(np.abs(got - expected)) < 1e-8


def test_apply_basics():
    spec = BasisSpec(1, 1.0, 3)
    v = np.arange(4) + 1j
    assert np.array_equal(apply(TruncatedOperator(spec, np.eye(4), "composition"), v), v)
    assert not np.any(apply(TruncatedOperator(spec, np.zeros((4, 4)), "composition"), v))
    with pytest.raises(DimensionMismatch):
        apply(TruncatedOperator(spec, np.eye(4), "composition"), np.ones(3))


def test_truncated_operator_is_immutable_and_restricts():
    P = product_compression(S.build(b=1), S.build(b=-1), SPEC40)
    with pytest.raises(ValueError):
        P.entries[0, 0] = 0
    small = product_compression(S.build(b=1), S.build(b=-1), BasisSpec(1, 1.0, 10))
    assert np.array_equal(P.restrict(10).entries, small.entries)
    with pytest.raises(DimensionMismatch):
        TruncatedOperator(BasisSpec(1, 1.0, 3), np.eye(3), "composition")


def _translation_reference(a: complex, M: int) -> np.ndarray:
    # 30-digit evaluation of <U_a e_k, e_j> at alpha = 1 from the binomial expansion
    import mpmath

    with mpmath.workdps(30):
        am = mpmath.mpc(a.real, a.imag)
        out = np.zeros((M + 1, M + 1), dtype=complex)
        for j in range(M + 1):
            for k in range(M + 1):
                s = mpmath.fsum(
                    mpmath.binomial(k, p) * (-am) ** (k - p) * mpmath.conj(am) ** (j - p)
                    / mpmath.factorial(j - p)
                    for p in range(min(j, k) + 1)
                )
                scale = mpmath.exp(-abs(am) ** 2 / 2) * mpmath.sqrt(
                    mpmath.factorial(j) / mpmath.factorial(k)
                )
                out[j, k] = complex(s * scale)
    return out


@pytest.mark.parametrize("a", [1.06 + 1.06j, -1.5])
def test_translation_sides_against_high_precision_reference(a):
    # terms of size ~1e6 cancel here, so plain float64 sums miss 1e-10
    ref = _translation_reference(a, 40)
    gamma = math.exp(0.5 * abs(a) ** 2)
    U = translation_unitary(a, SPEC40).entries
    P = product_compression(S.kernel(a, 1.0), S.build(b=-np.conj(a)), SPEC40).entries
    assert np.max(np.abs(U - ref)) <= 1e-12
    assert np.max(np.abs(P - gamma * ref)) <= 1e-11


@settings(max_examples=15, deadline=None)
@given(b=st.complex_numbers(max_magnitude=1.5), cf=st.complex_numbers(max_magnitude=0.5),
       cg=st.complex_numbers(max_magnitude=0.5))
def test_bounded_pair_norm_tends_to_gamma(b, cf, cg):
    f, g = S.build(b=b, c0=cf), S.build(b=-b, c0=cg)
    verdict = symbols.classify_product(f, g, 1.0)
    assert verdict.tag is symbols.Verdict.BOUNDED_UNITARY_MULTIPLE
    norm = operator_norm(product_compression(f, g, SPEC40))
    bound = abs(verdict.gamma)
    assert abs(norm / bound - 1) <= 0.01
    assert norm <= bound + 1e-9


@settings(max_examples=15, deadline=None)
@given(r=st.floats(0.1, 0.45), phase=st.floats(0, 2 * math.pi), b=st.complex_numbers(max_magnitude=1))
def test_quadratic_pair_norm_grows(r, phase, b):
    # below |A| ~ 0.06 the growth is real but too slow to show by M = 40
    A = r * cmath.exp(1j * phase)
    f, g = S.build(A=A, b=b), S.build(A=-A, b=-b)
    assert symbols.classify_product(f, g, 1.0).tag is symbols.Verdict.UNBOUNDED_QUADRATIC
    curve = dict(norm_curve(f, g, 1.0, [10, 40]))
    assert curve[40] > 1.5 * curve[10]
