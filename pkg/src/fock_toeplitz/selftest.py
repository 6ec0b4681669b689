"""Invariant checks run by ``fock-toeplitz selftest``."""
from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from . import core, operators, oracle, symbols
from .core import BasisSpec
from .experiments import ExperimentReport
from .symbols import ExponentialSymbol as S

ORACLE_TOL = 1e-8

Check = Callable[[int, int], tuple[bool, str]]


def check_orthonormality(order: int, seed: int) -> tuple[bool, str]:
    worst = 0.0
    for alpha in (0.5, 1.0, 2.0):
        spec = BasisSpec(1, alpha, 12)
        gram = oracle.oracle_matrix(S.constant(1), spec, order=order)
        worst = max(worst, float(np.max(np.abs(gram - np.eye(spec.size)))))
    return worst <= ORACLE_TOL, f"max |<e_m,e_k> - delta| = {worst:.2e}"


def _oracle_symbols():
    return [S.constant(1), S.build(prefactor=(1,)), S.build(b=1), S.build(A=0.2),
            S.build(prefactor=(1,), b=1)]


def check_analytic_entries(order: int, seed: int) -> tuple[bool, str]:
    worst = 0.0
    for alpha in (0.5, 1.0, 2.0):
        spec = BasisSpec(1, alpha, 8)
        for f in _oracle_symbols():
            ref = oracle.oracle_matrix(f, spec, order=order)
            diff = operators.toeplitz_analytic(f, spec).entries - ref
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst <= ORACLE_TOL, f"max entry error = {worst:.2e}"


def check_adjointness(order: int, seed: int) -> tuple[bool, str]:
    worst = 0.0
    for alpha in (0.5, 1.0, 2.0):
        spec = BasisSpec(1, alpha, 8)
        for g in _oracle_symbols() + [S.build(b=-1 + 0.5j)]:
            co = operators.toeplitz_coanalytic(g, spec).entries
            diff = co - oracle.oracle_matrix(g, spec, conjugated=True, order=order)
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst <= ORACLE_TOL, f"max |T_conj(g) - oracle| = {worst:.2e}"


def check_translation_identity(order: int, seed: int) -> tuple[bool, str]:
    worst = 0.0
    spec = BasisSpec(1, 1.0, 40)
    for a in (1.0, 0.7 + 0.2j, -0.5j):
        gamma = math.exp(0.5 * abs(a) ** 2)
        P = operators.product_compression(S.kernel(a, 1.0), S.build(b=-np.conj(a)), spec)
        U = operators.translation_unitary(a, spec)
        worst = max(worst, float(np.max(np.abs(P.entries - gamma * U.entries))))
    return worst <= 1e-10, f"max |T_f T_conj(g) - gamma U_a| = {worst:.2e}"


def check_berezin(order: int, seed: int) -> tuple[bool, str]:
    spec = BasisSpec(1, 1.0, 40)
    f, g = S.build(b=1), S.build(b=-1)
    op = operators.product_compression(f, g, spec)
    co = operators.toeplitz_coanalytic(g, spec)
    worst_b = worst_e = 0.0
    for z in (0.5, 1j, -1.5 + 0.5j, 2.0, 1.2 - 1.4j):
        exact = symbols.berezin_symbolic(f, g, z)
        worst_b = max(worst_b, abs(operators.berezin_numeric(op, z) - exact))
        v = core.normalized_kernel_coeffs(z, spec)
        resid = operators.apply(co, v) - np.conj(symbols.evaluate(g, z)) * v
        worst_e = max(worst_e, float(np.linalg.norm(resid)))
    ok = worst_b <= 1e-6 and worst_e <= 1e-6
    return ok, f"berezin error = {worst_b:.2e}, eigen residual = {worst_e:.2e}"


def check_monte_carlo(order: int, seed: int) -> tuple[bool, str]:
    def e1(z):
        return z[:, 0]

    est, se = oracle.mc_inner(e1, e1, 1.0, samples=200_000, seed=seed)
    quad = oracle.gaussian_inner(e1, e1, 1.0, order=order)
    ok = abs(est - quad) <= 4 * se
    return ok, f"MC {est.real:.5f} +/- {se:.1e} vs quadrature {quad.real:.5f}"


def check_membership(order: int, seed: int) -> tuple[bool, str]:
    got = [symbols.fock_membership(S.build(A=a), 1.0) for a in (0.49, 0.5, 0.51)]
    return got == [True, False, False], f"membership at 0.49/0.5/0.51 = {got}"


def check_classifier(order: int, seed: int) -> tuple[bool, str]:
    tags = [
        symbols.classify_product(S.build(b=1), S.build(b=-1), 1.0).tag,
        symbols.classify_product(S.build(A=0.2), S.build(A=-0.2), 1.0).tag,
        symbols.classify_product(S.build(b=1), S.build(b=1), 1.0).tag,
        symbols.classify_product(S.zero(), S.build(b=1), 1.0).tag,
    ]
    expected = [symbols.Verdict.BOUNDED_UNITARY_MULTIPLE, symbols.Verdict.UNBOUNDED_QUADRATIC,
                symbols.Verdict.UNBOUNDED_NONCONSTANT_PRODUCT, symbols.Verdict.ZERO_OPERATOR]
    return tags == expected, ", ".join(t.value for t in tags)


def check_kernel_growth(order: int, seed: int) -> tuple[bool, str]:
    f, g = S.build(A=0.2), S.build(A=-0.2)
    rs = np.linspace(0, 20, 41)
    logs = [math.log(abs(symbols.product_kernel(f, g, r, r + 1, 1.0))) for r in rs]
    slope = np.polyfit(rs, logs, 1)[0]
    return abs(slope - 0.4) <= 1e-9, f"slope = {slope:.12f}"


CHECKS: dict[str, Check] = {
    "orthonormality": check_orthonormality,
    "analytic_vs_oracle": check_analytic_entries,
    "adjointness": check_adjointness,
    "translation_identity": check_translation_identity,
    "berezin_and_eigen": check_berezin,
    "monte_carlo_vs_quadrature": check_monte_carlo,
    "membership_boundary": check_membership,
    "classifier": check_classifier,
    "kernel_growth": check_kernel_growth,
}


def run_selftest(order: int = oracle.DEFAULT_ORDER[1], seed: int = 0) -> ExperimentReport:
    """Run every check; ``order`` feeds the quadrature checks, ``seed`` the Monte Carlo one."""
    start = time.perf_counter()
    rows = []
    for name, check in CHECKS.items():
        try:
            ok, detail = check(order, seed)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append([name, "pass" if ok else "FAIL", detail])
    passed = all(r[1] == "pass" for r in rows)
    report = ExperimentReport(
        "selftest", {"order": order, "seed": seed}, {name: status for name, status, _ in rows},
        {"oracle": ORACLE_TOL}, passed, columns=["check", "status", "detail"], rows=rows,
    )
    report.wall_time = time.perf_counter() - start
    return report


def scoreboard(report: ExperimentReport) -> str:
    width = max(len(r[0]) for r in report.rows)
    lines = [f"{name:<{width}}  {status:<4}  {detail}" for name, status, detail in report.rows]
    n_pass = sum(r[1] == "pass" for r in report.rows)
    lines.append(f"{n_pass}/{len(report.rows)} checks passed")
    return "\n".join(lines) + "\n"
