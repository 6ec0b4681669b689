"""Symbol literals and matrix export.

Symbol JSON::

    {"n": 1, "scale": [re, im], "prefactor": [0], "A": [[[re, im]]],
     "b": [[re, im]], "c0": [re, im]}

Matrices are written either as CSV rows ``row,col,re,im`` (every entry, in
row-major order) or as a JSON envelope ``{"spec", "provenance", "entries"}``.
Floats use Python's shortest round-trip repr, so reading back is bit-exact.
"""
from __future__ import annotations

import csv
import io
import json
from typing import Any

import numpy as np

from .core import BasisSpec
from .errors import SymbolParseError
from .operators import TruncatedOperator
from .symbols import ExponentialSymbol, QuadraticPolynomial

CSV_HEADER = ["row", "col", "re", "im"]


def _complex(value: Any, path: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        return complex(value[0], value[1])
    raise SymbolParseError(f"{path}: expected [re, im], got {value!r}")


def _complex_list(value: Any, length: int, path: str) -> list[complex]:
    if not isinstance(value, list) or len(value) != length:
        raise SymbolParseError(f"{path}: expected a list of {length} complex numbers")
    return [_complex(x, f"{path}[{i}]") for i, x in enumerate(value)]


def symbol_from_dict(data: Any) -> ExponentialSymbol:
    if not isinstance(data, dict):
        raise SymbolParseError("$: symbol literal must be a JSON object")
    unknown = set(data) - {"n", "scale", "prefactor", "A", "b", "c0"}
    if unknown:
        raise SymbolParseError(f"$: unknown keys {sorted(unknown)}")
    n = data.get("n", 1)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SymbolParseError(f"$.n: expected a positive integer, got {n!r}")
    scale = _complex(data.get("scale", 1), "$.scale")
    prefactor = data.get("prefactor", [0] * n)
    if (
        not isinstance(prefactor, list)
        or len(prefactor) != n
        or not all(isinstance(k, int) and not isinstance(k, bool) and k >= 0 for k in prefactor)
    ):
        raise SymbolParseError(f"$.prefactor: expected {n} nonnegative integers, got {prefactor!r}")
    A_raw = data.get("A", [[0] * n for _ in range(n)])
    if not isinstance(A_raw, list) or len(A_raw) != n:
        raise SymbolParseError(f"$.A: expected {n} rows")
    A = [_complex_list(row, n, f"$.A[{i}]") for i, row in enumerate(A_raw)]
    b = _complex_list(data.get("b", [0] * n), n, "$.b")
    c0 = _complex(data.get("c0", 0), "$.c0")
    return ExponentialSymbol(scale, tuple(prefactor), QuadraticPolynomial(np.array(A), np.array(b), c0))


def parse_symbol(text: str) -> ExponentialSymbol:
    """Parse a symbol literal; JSON syntax errors report line and column."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SymbolParseError(
            f"invalid JSON at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from None
    return symbol_from_dict(data)


def dump_symbol(f: ExponentialSymbol) -> str:
    return json.dumps(f.to_dict())


def operator_to_json(op: TruncatedOperator) -> str:
    entries = [[[float(x.real), float(x.imag)] for x in row] for row in op.entries]
    return json.dumps({"spec": op.spec.to_dict(), "provenance": op.provenance, "entries": entries})


def operator_from_json(text: str) -> TruncatedOperator:
    data = json.loads(text)
    spec = BasisSpec(**data["spec"])
    entries = np.array([[complex(re, im) for re, im in row] for row in data["entries"]])
    return TruncatedOperator(spec, entries, data["provenance"])


def operator_to_csv(op: TruncatedOperator) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    rows, cols = op.shape
    for j in range(rows):
        for k in range(cols):
            x = op.entries[j, k]
            writer.writerow([j, k, repr(float(x.real)), repr(float(x.imag))])
    return buf.getvalue()


def operator_from_csv(text: str, spec: BasisSpec, provenance: str = "imported") -> TruncatedOperator:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    entries = np.zeros((spec.size, spec.size), dtype=complex)
    for row, col, re, im in reader:
        entries[int(row), int(col)] = complex(float(re), float(im))
    return TruncatedOperator(spec, entries, provenance)
