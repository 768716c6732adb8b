"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`; matrices are 2-D numpy arrays of
``dtype=object`` holding Fractions.  Elimination pivots on the first nonzero
entry of each column so kernel bases are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible."""


def scalar(x) -> Fraction:
    """Coerce ``x`` (int, Fraction, or ``"p/q"`` string) to a reduced Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def as_matrix(rows) -> np.ndarray:
    """Build an exact matrix from nested sequences (or an existing array)."""
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D array, got shape {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = scalar(x)
    return out


def as_vector(xs) -> np.ndarray:
    arr = np.array(list(xs), dtype=object)
    out = np.empty(arr.shape[0], dtype=object)
    for i, x in enumerate(arr):
        out[i] = scalar(x)
    return out


def zeros(*shape: int) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def is_zero(arr) -> bool:
    return all(x == 0 for x in np.asarray(arr, dtype=object).flat)


def matrix_power(m: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        raise ValueError("negative power")
    out = identity(m.shape[0])
    for _ in range(k):
        out = out @ m
    return out


def _rows_of(m) -> list[list[Fraction]]:
    m = np.asarray(m, dtype=object)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {m.shape}")
    return [[scalar(x) for x in row] for row in m]


def rref(m) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns.

    Rows are returned as lists; zero rows are dropped.
    """
    rows = _rows_of(m)
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [x / p for x in rows[r]]
        prow = rows[r]
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i][c]
            if f == 0:
                continue
            row = rows[i]
            for j in nz:
                row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m) -> int:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m) -> list[np.ndarray]:
    """Basis of the right null space ``{v : m v = 0}``.

    One vector per free column, with a 1 in that column.
    """
    m = np.asarray(m, dtype=object)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {m.shape}")
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return [_unit(ncols, j) for j in range(ncols)]
    rows, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = zeros(ncols)
        v[free] = ONE
        for row, pc in zip(rows, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def _unit(n: int, j: int) -> np.ndarray:
    v = zeros(n)
    v[j] = ONE
    return v


def solve(m, b) -> np.ndarray | None:
    """A particular solution of ``m x = b`` or ``None`` if inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    m = np.asarray(m, dtype=object)
    b = as_vector(b)
    if m.ndim != 2 or b.shape[0] != m.shape[0]:
        raise DimensionError(
            f"right-hand side of length {b.shape[0]} does not match {m.shape}")
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return zeros(ncols)
    aug = np.concatenate([m, b.reshape(-1, 1)], axis=1)
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = zeros(ncols)
    for row, pc in zip(rows, pivots):
        x[pc] = row[ncols]
    return x


def column_space_basis(m) -> list[np.ndarray]:
    """Pivot columns of ``m`` (a basis of its column space)."""
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return []
    _, pivots = rref(m)
    return [m[:, j].copy() for j in pivots]


def inverse(m) -> np.ndarray:
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionError(f"cannot invert a {m.shape} matrix")
    rows, pivots = rref(np.concatenate([m, identity(n)], axis=1))
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    return as_matrix([row[n:] for row in rows])


def columns_to_matrix(cols: Sequence[np.ndarray], nrows: int) -> np.ndarray:
    """Stack vectors as the columns of a matrix (``nrows`` x len(cols))."""
    out = zeros(nrows, len(cols))
    for j, c in enumerate(cols):
        out[:, j] = c
    return out


def extend_to_complement(span: Iterable[np.ndarray], candidates: Iterable[np.ndarray],
                         dim: int) -> list[np.ndarray]:
    """Greedily pick candidates independent modulo ``span``.

    Returns the chosen candidates, which together with ``span`` are
    linearly independent.
    """
    current = list(span)
    r = rank(columns_to_matrix(current, dim)) if current else 0
    chosen = []
    for v in candidates:
        trial = current + [v]
        r2 = rank(columns_to_matrix(trial, dim))
        if r2 > r:
            current, r = trial, r2
            chosen.append(v)
    return chosen
