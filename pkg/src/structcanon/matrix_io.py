"""Reading and writing dense complex matrices.

Two formats are supported:

* Matrix Market ``array complex general``: header line, a ``rows cols``
  line, then one ``re im`` pair per line in column-major order;
* JSON ``{"rows": R, "cols": C, "re": [...], "im": [...]}`` in row-major order.

Floats are written with ``repr`` (shortest round-trip form), so a write
followed by a read is bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import StructCanonError

MM_HEADER = "%%MatrixMarket matrix array complex general"


class MatrixFormatError(StructCanonError, ValueError):
    """Malformed matrix file; the message names the offending line."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
        self.line = line


def _fmt(x):
    return repr(float(x))


def format_for(path, fmt=None):
    if fmt is not None:
        if fmt not in ("mm", "json"):
            raise ValueError(f"unknown matrix format {fmt!r}")
        return fmt
    return "json" if str(path).lower().endswith(".json") else "mm"


def dumps_mm(a):
    a = np.asarray(a, dtype=np.complex128)
    rows, cols = a.shape
    lines = [MM_HEADER, f"{rows} {cols}"]
    for z in a.T.ravel():
        lines.append(f"{_fmt(z.real)} {_fmt(z.imag)}")
    return "\n".join(lines) + "\n"


def loads_mm(text, path=None):
    lines = text.splitlines()
    if not lines or lines[0].strip().lower() != MM_HEADER.lower():
        raise MatrixFormatError(f"expected header {MM_HEADER!r}", path, 1)
    body = []
    for lineno, raw in enumerate(lines[1:], start=2):
        s = raw.strip()
        if s and not s.startswith("%"):
            body.append((lineno, s))
    if not body:
        raise MatrixFormatError("missing dimension line", path, 2)
    lineno, dims = body[0]
    parts = dims.split()
    try:
        rows, cols = (int(p) for p in parts)
    except ValueError:
        raise MatrixFormatError(f"malformed dimension line {dims!r}", path, lineno) from None
    if rows < 1 or cols < 1:
        raise MatrixFormatError(f"nonpositive dimensions {rows} x {cols}", path, lineno)
    entries = body[1:]
    if len(entries) != rows * cols:
        last = entries[-1][0] if entries else lineno
        raise MatrixFormatError(
            f"expected {rows * cols} entries for {rows} x {cols}, found {len(entries)}", path, last)
    vals = np.empty(rows * cols, dtype=np.complex128)
    for k, (ln, s) in enumerate(entries):
        parts = s.split()
        if len(parts) != 2:
            raise MatrixFormatError(f"expected 're im', got {s!r}", path, ln)
        try:
            vals[k] = complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise MatrixFormatError(f"non-numeric entry {s!r}", path, ln) from None
    return vals.reshape(cols, rows).T.copy()


def dumps_json(a):
    a = np.asarray(a, dtype=np.complex128)
    rows, cols = a.shape
    flat = a.ravel()
    # repr-based floats keep the round trip exact
    re = "[" + ", ".join(_fmt(v) for v in flat.real) + "]"
    im = "[" + ", ".join(_fmt(v) for v in flat.imag) + "]"
    return f'{{"rows": {rows}, "cols": {cols}, "re": {re}, "im": {im}}}\n'


def loads_json(text, path=None):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(exc.msg, path, exc.lineno) from None
    if not isinstance(data, dict):
        raise MatrixFormatError("top level must be an object", path, 1)
    try:
        rows, cols = int(data["rows"]), int(data["cols"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"bad matrix object: {exc}", path, 1) from None
    if rows < 1 or cols < 1 or re.shape != (rows * cols,) or im.shape != (rows * cols,):
        raise MatrixFormatError(f"entry count does not match {rows} x {cols}", path, 1)
    return (re + 1j * im).reshape(rows, cols)


def read_matrix(path, fmt=None):
    path = Path(path)
    text = path.read_text()
    if format_for(path, fmt) == "json":
        return loads_json(text, path)
    return loads_mm(text, path)


def write_matrix(path, a, fmt=None):
    path = Path(path)
    text = dumps_json(a) if format_for(path, fmt) == "json" else dumps_mm(a)
    path.write_text(text)
    return path
