"""Text file formats for matrices and support masks.

Matrix file::

    pcpmat 1
    <rows> <cols>
    v11 v12 ... (rows*cols whitespace-separated values, row-major)

Mask file::

    pcpmask 1
    <rows> <cols> <count>
    i j          (count lines, zero-based)

Values are written with 17 significant digits so write-then-read is exact.
"""

from __future__ import annotations

import numpy as np

from .core import SupportMask, as_matrix

MATRIX_MAGIC = "pcpmat"
MASK_MAGIC = "pcpmask"
FORMAT_VERSION = 1


class ParseError(ValueError):
    """Malformed matrix or mask file; message carries path and line number."""

    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def _read_lines(path):
    with open(path, "r", encoding="ascii") as fh:
        return fh.read().split("\n")


def _parse_header(path, lines, magic, n_fields):
    if not lines or lines[0].split() != [magic, str(FORMAT_VERSION)]:
        raise ParseError(path, 1, f"expected header '{magic} {FORMAT_VERSION}'")
    if len(lines) < 2:
        raise ParseError(path, 2, "missing dimension line")
    fields = lines[1].split()
    if len(fields) != n_fields:
        raise ParseError(path, 2, f"expected {n_fields} integers, got {lines[1]!r}")
    out = []
    for tok in fields:
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(path, 2, f"non-integer token {tok!r}") from None
    if any(x < 0 for x in out) or out[0] == 0 or out[1] == 0:
        raise ParseError(path, 2, f"invalid dimensions {out}")
    return out


def write_matrix(path, m) -> None:
    m = as_matrix(m)
    rows, cols = m.shape
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{MATRIX_MAGIC} {FORMAT_VERSION}\n{rows} {cols}\n")
        for row in m:
            fh.write(" ".join(f"{x:.17g}" for x in row))
            fh.write("\n")


def read_matrix(path) -> np.ndarray:
    lines = _read_lines(path)
    rows, cols = _parse_header(path, lines, MATRIX_MAGIC, 2)
    need = rows * cols
    values = np.empty(need, dtype=np.float64)
    got = 0
    for lineno, line in enumerate(lines[2:], start=3):
        for tok in line.split():
            try:
                x = float(tok)
            except ValueError:
                raise ParseError(path, lineno, f"non-numeric token {tok!r}") from None
            if not np.isfinite(x):
                raise ParseError(path, lineno, f"non-finite value {tok!r}")
            if got >= need:
                raise ParseError(path, lineno, f"more than {need} values in body")
            values[got] = x
            got += 1
    if got != need:
        raise ParseError(path, len(lines), f"expected {need} values, found {got}")
    return values.reshape(rows, cols)


def write_mask(path, mask: SupportMask) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{MASK_MAGIC} {FORMAT_VERSION}\n{mask.rows} {mask.cols} {len(mask)}\n")
        for i, j in mask.entries:
            fh.write(f"{i} {j}\n")


def read_mask(path) -> SupportMask:
    lines = _read_lines(path)
    rows, cols, count = _parse_header(path, lines, MASK_MAGIC, 3)
    entries = np.empty((count, 2), dtype=np.int64)
    got = 0
    for lineno, line in enumerate(lines[2:], start=3):
        toks = line.split()
        if not toks:
            continue
        if len(toks) != 2:
            raise ParseError(path, lineno, f"expected 'i j', got {line!r}")
        try:
            i, j = int(toks[0]), int(toks[1])
        except ValueError:
            raise ParseError(path, lineno, f"non-integer token in {line!r}") from None
        if got >= count:
            raise ParseError(path, lineno, f"more than {count} pairs in body")
        entries[got] = (i, j)
        got += 1
    if got != count:
        raise ParseError(path, len(lines), f"expected {count} pairs, found {got}")
    try:
        return SupportMask(rows, cols, entries)
    except ValueError as exc:
        raise ParseError(path, len(lines), str(exc)) from None
