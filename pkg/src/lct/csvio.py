"""CSV reading/writing shared by every exported data type.

Numbers are written with 17 significant digits, '.' decimal separator and
LF line endings.  Files are written to a temporary sibling and renamed into
place, so readers never see a partial file.
"""
from __future__ import annotations

import csv
import io
import os
import tempfile

import numpy as np

__all__ = ["write_csv", "read_csv", "format_number", "format_csv"]


def format_number(x):
    return "%.17g" % float(x)


def format_csv(header, columns):
    """CSV text for equal-length ``columns`` under ``header``."""
    cols = [np.asarray(c).ravel() for c in columns]
    if len(cols) != len(header):
        raise ValueError("header/column count mismatch")
    n = cols[0].size if cols else 0
    if any(c.size != n for c in cols):
        raise ValueError("columns differ in length")
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*cols):
        buf.write(",".join(format_number(x) for x in row) + "\n")
    return buf.getvalue()


def write_csv(path, header, columns):
    """Write equal-length ``columns`` under ``header`` atomically."""
    text = format_csv(header, columns)
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", suffix=".csv", dir=d)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path, required):
    """Read a headed CSV; returns {column: float array} for ``required`` columns.

    Missing optional ``im`` columns read as zeros.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        rows = [r for r in reader if r and any(c.strip() for c in r)]
    out = {}
    for name in required:
        if name not in header:
            if name == "im":
                out[name] = np.zeros(len(rows))
                continue
            raise ValueError(f"{path}: missing column {name!r} (header {header})")
        i = header.index(name)
        try:
            out[name] = np.array([float(r[i]) for r in rows])
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}: bad value in column {name!r}: {exc}") from None
    return out
