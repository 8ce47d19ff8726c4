"""Plain-text matrix files and JSON reports.

Matrix file layout::

    m n real|complex
    a11 a12 ... a1n
    ...

Complex entries are written as ``re im`` pairs. Blank lines and ``#``
comments are ignored; tokens may be split over lines arbitrarily as long as
the total count matches the header. Numbers are written with 17 significant
digits, which round-trips every finite double exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from subspace_cond.linalg_core import Field, Matrix

PathLike = Union[str, Path]


class MatrixFormatError(ValueError):
    pass


def fmt(x: float) -> str:
    return "%.17g" % x


def _parse_number(tok: str) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise MatrixFormatError(f"not a number: {tok!r}") from None
    if not math.isfinite(v):
        raise MatrixFormatError(f"non-finite entry {tok!r}")
    return v


def parse_matrix(text: str) -> Matrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    header = lines[0].split()
    if len(header) != 3:
        raise MatrixFormatError(f"header must be 'm n real|complex', got {lines[0]!r}")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise MatrixFormatError(f"bad dimensions in header {lines[0]!r}") from None
    if m < 1 or n < 1:
        raise MatrixFormatError("dimensions must be positive")
    try:
        fld = Field(header[2].lower())
    except ValueError:
        raise MatrixFormatError(f"unknown field {header[2]!r}") from None

    tokens = " ".join(lines[1:]).split()
    per_entry = 2 if fld is Field.COMPLEX else 1
    if len(tokens) != m * n * per_entry:
        raise MatrixFormatError(f"expected {m * n * per_entry} numbers, found {len(tokens)}")
    vals = np.array([_parse_number(t) for t in tokens], dtype=float)
    if fld is Field.COMPLEX:
        # assign parts separately: re + 1j*im would drop the sign of zeros
        data = np.empty(m * n, dtype=np.complex128)
        data.real = vals[0::2]
        data.imag = vals[1::2]
        data = data.reshape(m, n)
    else:
        data = vals.reshape(m, n)
    return Matrix(data, fld)


def serialize_matrix(M: Matrix) -> str:
    out = [f"{M.rows} {M.cols} {M.field.value}"]
    for row in M.data:
        if M.is_complex:
            out.append(" ".join(f"{fmt(z.real)} {fmt(z.imag)}" for z in row))
        else:
            out.append(" ".join(fmt(x) for x in row))
    return "\n".join(out) + "\n"


def read_matrix(path: PathLike) -> Matrix:
    return parse_matrix(Path(path).read_text())


def write_matrix(path: PathLike, M: Matrix) -> None:
    Path(path).write_text(serialize_matrix(M))


def _encode(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_encode(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    return obj


def _decode(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    if obj in ("inf", "-inf", "nan"):
        return float(obj)
    return obj


def dumps_report(report: Dict[str, Any]) -> str:
    """JSON text with infinities written as the string ``"inf"``.

    Python's float repr is the shortest string that round-trips, so no
    precision is lost (it never needs more than 17 significant digits).
    """
    return json.dumps(_encode(report), indent=2, sort_keys=True)


def loads_report(text: str) -> Dict[str, Any]:
    return _decode(json.loads(text))
