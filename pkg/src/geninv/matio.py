"""Matrix file parsing and serialization.

Format: a header line ``rows cols field`` with field in {real, complex},
followed by whitespace-separated entries in row-major order. Complex entries
are written as ``re im`` token pairs. Serialization uses 17 significant
digits, so parse(serialize(a)) reproduces a bit for bit.
"""

from __future__ import annotations

import math
from io import StringIO
from pathlib import Path

import numpy as np

from .errors import InputError


def _tokens_with_positions(lines, start):
    for line_no, line in enumerate(lines, start=start):
        for col_no, token in enumerate(line.split(), start=1):
            yield token, line_no, col_no


def _parse_float(token: str, line_no: int, col_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise InputError(
            f"unparsable entry {token!r} at line {line_no}, token {col_no}"
        ) from None
    if not math.isfinite(value):
        raise InputError(
            f"non-finite entry {token!r} at line {line_no}, token {col_no}"
        )
    return value


def parse_matrix(source) -> np.ndarray:
    """Parse a matrix from a path, a string of file content, or a text stream."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        path = Path(source)
        if path.exists():
            text = path.read_text()
        elif isinstance(source, str) and "\n" in source:
            text = source
        else:
            raise InputError(f"no such matrix file: {source}")
    lines = text.splitlines()
    if not lines or not lines[0].split():
        raise InputError("missing header line 'rows cols field'")
    header = lines[0].split()
    if len(header) != 3:
        raise InputError(f"malformed header {lines[0]!r}, expected 'rows cols field'")
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError:
        raise InputError(f"malformed header {lines[0]!r}, rows/cols must be integers") from None
    field = header[2]
    if rows < 1 or cols < 1:
        raise InputError("rows and cols must be positive")
    if field not in ("real", "complex"):
        raise InputError(f"unknown field {field!r}, expected 'real' or 'complex'")

    values = [
        _parse_float(tok, line_no, col_no)
        for tok, line_no, col_no in _tokens_with_positions(lines[1:], start=2)
    ]
    per_entry = 2 if field == "complex" else 1
    if field == "complex" and len(values) % 2:
        raise InputError(
            f"complex body must hold 're im' pairs, found {len(values)} tokens"
        )
    found = len(values) // per_entry
    if found != rows * cols:
        raise InputError(f"expected {rows * cols} entries, found {found}")
    if field == "complex":
        data = np.array(values[0::2]) + 1j * np.array(values[1::2])
        return data.reshape(rows, cols).astype(np.complex128)
    return np.array(values, dtype=np.float64).reshape(rows, cols)


def serialize_matrix(a) -> str:
    """Render a matrix in the file format at full double precision."""
    a = np.asarray(a)
    if a.ndim != 2 or 0 in a.shape:
        raise InputError("only nonempty 2-d matrices can be serialized")
    complex_ = np.iscomplexobj(a)
    field = "complex" if complex_ else "real"
    out = StringIO()
    out.write(f"{a.shape[0]} {a.shape[1]} {field}\n")
    for row in a:
        if complex_:
            tokens = [f"{v.real:.17g} {v.imag:.17g}" for v in row]
        else:
            tokens = [f"{float(v):.17g}" for v in row]
        out.write(" ".join(tokens))
        out.write("\n")
    return out.getvalue()


def save_matrix(a, path) -> None:
    Path(path).write_text(serialize_matrix(a))


def matrix_to_json(a):
    """Nested lists for JSON embedding; complex entries become [re, im] pairs."""
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return [[[float(v.real), float(v.imag)] for v in row] for row in a]
    return [[float(v) for v in row] for row in a]
