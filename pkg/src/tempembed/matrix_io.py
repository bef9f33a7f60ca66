"""Plain-text serialization of embedding and transformation matrices.

Embeddings: header ``rows dim``, then one row per line.
Transforms: header ``dim``, then ``dim`` rows of ``dim`` values.
Values are written with 17 significant digits so float64 round-trips exactly.
"""

from __future__ import annotations

import io
import os

import numpy as np


def _fmt_rows(a: np.ndarray) -> str:
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite values")
    return "".join(" ".join(format(x, ".17g") for x in row) + "\n" for row in a.tolist())


def dumps_embedding(phi: np.ndarray) -> str:
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 2:
        raise ValueError("embedding must be 2-D")
    return f"{phi.shape[0]} {phi.shape[1]}\n" + _fmt_rows(phi)


def dumps_transform(w: np.ndarray) -> str:
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("transform must be square")
    return f"{w.shape[0]}\n" + _fmt_rows(w)


def _parse(text: str, square: bool) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    head = lines[0].split()
    if square:
        if len(head) != 1:
            raise ValueError("transform header must be a single 'dim'")
        rows = cols = int(head[0])
    else:
        if len(head) != 2:
            raise ValueError("embedding header must be 'rows dim'")
        rows, cols = int(head[0]), int(head[1])
    body = lines[1:]
    if len(body) != rows:
        raise ValueError(f"expected {rows} rows, found {len(body)}")
    a = np.loadtxt(io.StringIO("\n".join(body)), dtype=float, ndmin=2) if rows else np.zeros((0, cols))
    if a.shape != (rows, cols):
        raise ValueError(f"expected shape {(rows, cols)}, found {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite values")
    return a


def loads_embedding(text: str) -> np.ndarray:
    return _parse(text, square=False)


def loads_transform(text: str) -> np.ndarray:
    return _parse(text, square=True)


def _atomic_write(path, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_embedding(path, phi: np.ndarray) -> None:
    _atomic_write(path, dumps_embedding(phi))


def read_embedding(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return loads_embedding(fh.read())


def write_transform(path, w: np.ndarray) -> None:
    _atomic_write(path, dumps_transform(w))


def read_transform(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return loads_transform(fh.read())
