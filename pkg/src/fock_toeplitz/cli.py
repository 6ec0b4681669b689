"""Command-line front end.

Exit codes: 0 pass, 1 tolerance failure, 2 input or hypothesis error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import experiments, formats, operators, selftest
from .core import BasisSpec
from .errors import FockToeplitzError
from .symbols import ExponentialSymbol

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_TRUNC = {1: 40, 2: 12}
DEFAULT_CURVE = {1: [10, 20, 30, 40], 2: [3, 6, 9, 12]}


def parse_complex(text: str) -> complex:
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_complex_vector(text: str) -> list[complex]:
    """Accept ``1``, ``0.7+0.2i``, ``1,0.5i`` or a JSON list of [re, im] pairs."""
    text = text.strip()
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise argparse.ArgumentTypeError(f"bad JSON at column {exc.colno}: {exc.msg}") from None
        return [complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in data]
    return [parse_complex(part) for part in text.split(",")]


def parse_matrix(text: str) -> np.ndarray:
    """``0.2`` for a 1x1 matrix, or JSON rows of numbers / [re, im] pairs."""
    text = text.strip()
    if not text.startswith("["):
        return np.array([[parse_complex(text)]])
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"bad JSON at column {exc.colno}: {exc.msg}") from None
    return np.array([[complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in row]
                     for row in data])


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def load_symbol(arg: str) -> ExponentialSymbol:
    """A symbol literal given inline or as a path to a JSON file."""
    text = arg if arg.lstrip().startswith("{") else Path(arg).read_text()
    return formats.parse_symbol(text)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=1.0, help="Gaussian weight (default 1)")
    p.add_argument("--dim", type=int, default=1, help="complex dimension n (default 1)")
    p.add_argument("--trunc", type=int, default=None,
                   help="truncation degree M (default 40 for n=1, 12 for n=2)")
    p.add_argument("--order", type=int, default=40,
                   help="quadrature order per axis for oracle checks (default 40)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for witness search and Monte Carlo (default 0)")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fock-toeplitz",
        description="Finite-section experiments for Toeplitz products on the Fock space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify T_f T_conj(g) as bounded or unbounded")
    p.add_argument("f", help="symbol JSON literal or path")
    p.add_argument("g", help="symbol JSON literal or path")
    _common(p)

    p = sub.add_parser("translation", help="compare T_f T_conj(g) with gamma U_a for kernel symbols")
    p.add_argument("--a", type=parse_complex_vector, default=[1 + 0j],
                   help="translation point, e.g. 1 or 0.7+0.2i or 1,0.5i")
    _common(p)

    p = sub.add_parser("quadratic-growth", help="norm growth versus bounded Berezin transform")
    p.add_argument("--coeff", type=parse_complex, default=0.2 + 0j,
                   help="quadratic coefficient c in f = exp(c z.z) (default 0.2)")
    p.add_argument("--trunc-list", type=parse_int_list, default=None,
                   help="truncation degrees for the norm curve (default 10,20,30,40)")
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=21)
    _common(p)

    p = sub.add_parser("kernel-growth", help="slope of log|T(ru, ru+v)| along a ray")
    p.add_argument("--A", dest="A", type=parse_matrix, default=np.array([[0.2]]))
    p.add_argument("--u", type=parse_complex_vector, default=[1 + 0j])
    p.add_argument("--v", type=parse_complex_vector, default=[1 + 0j])
    p.add_argument("--r-max", type=float, default=20.0)
    p.add_argument("--r-points", type=int, default=41)
    _common(p)

    p = sub.add_parser("export-matrix", help="write a compression matrix as CSV or JSON")
    p.add_argument("kind", choices=("analytic", "coanalytic", "product", "translation"))
    p.add_argument("--f", help="symbol for analytic/coanalytic/product")
    p.add_argument("--g", help="second symbol for product")
    p.add_argument("--a", type=parse_complex_vector, default=None, help="point for translation")
    _common(p)

    p = sub.add_parser("selftest", help="run the invariant suite and print a scoreboard")
    _common(p)
    return parser


def _trunc(args) -> int:
    if args.trunc is not None:
        return args.trunc
    return DEFAULT_TRUNC.get(args.dim, 12)


def _export(args) -> str:
    spec = BasisSpec(args.dim, args.alpha, _trunc(args))
    if args.kind == "translation":
        if args.a is None:
            raise ValueError("translation needs --a")
        op = operators.translation_unitary(args.a, spec)
    else:
        if args.f is None:
            raise ValueError(f"{args.kind} needs --f")
        f = load_symbol(args.f)
        if args.kind == "analytic":
            op = operators.toeplitz_analytic(f, spec)
        elif args.kind == "coanalytic":
            op = operators.toeplitz_coanalytic(f, spec)
        else:
            if args.g is None:
                raise ValueError("product needs --g")
            op = operators.product_compression(f, load_symbol(args.g), spec)
    return formats.operator_to_csv(op) if args.format == "csv" else formats.operator_to_json(op) + "\n"


def _run(args) -> experiments.ExperimentReport | str:
    if args.command == "classify":
        return experiments.run_classify(load_symbol(args.f), load_symbol(args.g), args.alpha, args.seed)
    if args.command == "translation":
        a = list(args.a)
        if len(a) == 1 and args.dim > 1:
            a = a + [0j] * (args.dim - 1)
        return experiments.run_translation(a, args.alpha, DEFAULT_TRUNC.get(len(a), 12)
                                      if args.trunc is None else args.trunc)
    if args.command == "quadratic-growth":
        curve = args.trunc_list or (DEFAULT_CURVE.get(args.dim, [3, 6, 9, 12]) if args.trunc is None
                                    else [max(1, args.trunc // 4 * i) for i in (1, 2, 3, 4)])
        return experiments.run_quadratic_growth(args.coeff, args.alpha, curve, n=args.dim,
                                          radius=args.radius, points=args.grid)
    if args.command == "kernel-growth":
        return experiments.run_kernel_growth(args.A, args.u, args.v, args.alpha,
                                             args.r_max, args.r_points)
    if args.command == "export-matrix":
        return _export(args)
    if args.command == "selftest":
        return selftest.run_selftest(order=args.order, seed=args.seed)
    raise AssertionError(args.command)


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if not path.is_absolute() and os.environ.get("FOCK_TOEPLITZ_OUTDIR"):
        path = Path(os.environ["FOCK_TOEPLITZ_OUTDIR"]) / path
    path.write_text(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = _run(args)
    except (FockToeplitzError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(result, str):
        _write(result, args.out)
        return EXIT_PASS
    if args.command == "selftest":
        sys.stderr.write(selftest.scoreboard(result))
    text = result.to_csv(args.timing) if args.format == "csv" else result.to_json(args.timing)
    _write(text, args.out)
    return EXIT_PASS if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
