"""Small exact dense matrices as tuples of rows.

Entries stay Python ints whenever they are integral; Fractions appear only
where division forces them.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError
from .exact_arith import Polynomial

Matrix = tuple  # tuple[tuple[int | Fraction, ...], ...]


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    m = tuple(tuple(_norm(Fraction(x) if not isinstance(x, int) else x) for x in row) for row in rows)
    if any(len(row) != len(m) for row in m):
        raise PreconditionError("matrix must be square")
    return m


def size(a: Matrix) -> int:
    return len(a)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(n: int) -> Matrix:
    return tuple((0,) * n for _ in range(n))


def scalar(c, n: int) -> Matrix:
    return tuple(tuple(_norm(c) if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(
        tuple(_norm(sum(x * y for x, y in zip(row, col) if x and y)) for col in bt)
        for row in a
    )


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(_norm(x + y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(_norm(x - y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a: Matrix, c) -> Matrix:
    return tuple(tuple(_norm(c * x) for x in row) for row in a)


def trace(a: Matrix):
    return _norm(sum(a[i][i] for i in range(len(a))))


def matpow(a: Matrix, k: int) -> Matrix:
    if k < 0:
        raise PreconditionError("negative matrix power")
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return result


def kron(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b)
    return tuple(
        tuple(_norm(a[i][j] * b[k][l]) for j in range(n) for l in range(m))
        for i in range(n)
        for k in range(m)
    )


@functools.lru_cache(maxsize=2048)
def charpoly(a: Matrix) -> Polynomial:
    """det(t*I - A) by the Faddeev-LeVerrier recursion."""
    n = len(a)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = zeros(n)
    for k in range(1, n + 1):
        m = add(matmul(a, m), scalar(coeffs[n - k + 1], n))
        coeffs[n - k] = _norm(-Fraction(trace(matmul(a, m))) / k)
    return Polynomial(tuple(coeffs))


def reversed_charpoly(a: Matrix) -> Polynomial:
    """det(I - t*A), the reversal of the characteristic polynomial."""
    n = len(a)
    cp = charpoly(a)
    return Polynomial(tuple(cp.coeff(n - i) for i in range(n + 1)))


def det(a: Matrix):
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _norm(Fraction(m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev)
        prev = m[k][k]
    return _norm(sign * m[n - 1][n - 1])


def commutes(a: Matrix, b: Matrix) -> bool:
    return matmul(a, b) == matmul(b, a)
