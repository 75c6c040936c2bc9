"""Integer matrices as numpy object arrays of Python ints.

Object arrays keep numpy's indexing and slicing while every entry stays an
arbitrary precision int, so no product ever overflows.
"""

from collections.abc import Iterable, Sequence
from typing import Any

import numpy as np

IntMatrix = np.ndarray


def zeros(rows: int, cols: int) -> IntMatrix:
    m = np.empty((rows, cols), dtype=object)
    m.fill(0)
    return m


def identity(n: int) -> IntMatrix:
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def int_matrix(
    data: Iterable[Iterable[Any]] | np.ndarray,
    rows: int | None = None,
    cols: int | None = None,
) -> IntMatrix:
    listed = [[int(x) for x in row] for row in data]
    r = len(listed) if rows is None else rows
    if cols is not None:
        c = cols
    elif listed:
        c = len(listed[0])
    else:
        c = 0
    m = zeros(r, c)
    if len(listed) != r:
        raise ValueError(f"Expected {r} rows, got {len(listed)}")
    for i, row in enumerate(listed):
        if len(row) != c:
            raise ValueError(f"Row {i} has {len(row)} entries, expected {c}")
        for j, x in enumerate(row):
            m[i, j] = x
    return m


def column(data: Sequence[Any]) -> IntMatrix:
    return int_matrix([[x] for x in data], rows=len(data), cols=1)


def copy(m: IntMatrix) -> IntMatrix:
    out = zeros(*m.shape)
    out[...] = m
    return out


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"Unable to multiply {a.shape} by {b.shape}")
    if 0 in (a.shape[0], a.shape[1], b.shape[1]):
        return zeros(a.shape[0], b.shape[1])
    return np.dot(a, b)


def transpose(m: IntMatrix) -> IntMatrix:
    return copy(m.T)


def is_zero(m: IntMatrix) -> bool:
    return all(x == 0 for x in m.flat)


def hstack(blocks: Sequence[IntMatrix], rows: int) -> IntMatrix:
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    c = 0
    for b in blocks:
        out[:, c : c + b.shape[1]] = b
        c += b.shape[1]
    return out


def block_diagonal(blocks: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def diagonal(entries: Sequence[int], rows: int | None = None) -> IntMatrix:
    n = len(entries)
    m = zeros(n if rows is None else rows, n)
    for i, d in enumerate(entries):
        m[i, i] = int(d)
    return m


def reduce_rows(m: IntMatrix, moduli: Sequence[int]) -> IntMatrix:
    out = copy(m)
    for i, d in enumerate(moduli):
        if d:
            out[i] = [x % d for x in out[i]]
    return out


def determinant(m: IntMatrix) -> int:
    """Fraction-free Bareiss elimination."""
    n, k = m.shape
    if n != k:
        raise ValueError(f"Determinant of a non-square matrix {m.shape}")
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in m]
    sign = 1
    prev = 1
    for p in range(n - 1):
        if a[p][p] == 0:
            swap = next((i for i in range(p + 1, n) if a[i][p] != 0), None)
            if swap is None:
                return 0
            a[p], a[swap] = a[swap], a[p]
            sign = -sign
        for i in range(p + 1, n):
            for j in range(p + 1, n):
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) // prev
        prev = a[p][p]
    return sign * a[n - 1][n - 1]


def to_lists(m: IntMatrix) -> list[list[int]]:
    return [[int(x) for x in row] for row in m]
