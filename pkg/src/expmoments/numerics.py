"""Exact rational kernels.

Factorials, rising factorials, complete homogeneous symmetric polynomials,
and exact determinants / semidefiniteness tests for small dense matrices.
Exact quantities are carried by ``fractions.Fraction`` (or plain ``int``),
which already guarantees reduced form and a positive denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


def is_exact(value) -> bool:
    """True for ints and Fractions (exact rationals), False otherwise."""
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def as_fraction(value) -> Fraction:
    """Coerce an exact number or a "p/q" string to Fraction; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(value) -> str:
    """Render an exact rational as "p/q", omitting the denominator when 1."""
    f = as_fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError("factorial is undefined for negative integers")
    return math.factorial(n)


def pochhammer(x, m: int):
    """Rising factorial x (x+1) ... (x+m-1); ``pochhammer(x, 0) == 1``.

    Works for any numeric type with * and +; exact inputs give exact output.
    """
    if m < 0:
        raise ValueError("pochhammer order must be >= 0")
    out = x**0
    for i in range(m):
        out = out * (x + i)
    return out


def complete_homogeneous_all(values: Sequence, m_max: int) -> tuple:
    """All complete homogeneous symmetric polynomials h_0 .. h_{m_max}.

    One dynamic-programming sweep per variable, O(len(values) * m_max); adding
    a variable v updates h_d <- h_d + v * h_{d-1} in ascending degree.
    """
    if m_max < 0:
        raise ValueError("degree must be >= 0")
    if len(values) == 0:
        raise ValueError("values must be nonempty")
    one = values[0] ** 0
    h = [one] + [0 * one] * m_max
    for v in values:
        for d in range(1, m_max + 1):
            h[d] = h[d] + v * h[d - 1]
    return tuple(h)


def complete_homogeneous(m: int, values: Sequence):
    """h_m(values), the sum of all degree-m monomials with nondecreasing
    index pattern; h_0 == 1."""
    return complete_homogeneous_all(values, m)[m]


@dataclass(frozen=True)
class RationalMatrix:
    """Dense square matrix of exact rationals, row-major entries."""

    order: int
    entries: tuple

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if len(self.entries) != self.order * self.order:
            raise ValueError("entry count does not match order")
        object.__setattr__(
            self, "entries", tuple(as_fraction(e) for e in self.entries)
        )

    @classmethod
    def from_rows(cls, rows) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        order = len(rows)
        flat = []
        for row in rows:
            if len(row) != order:
                raise ValueError("rows must form a square matrix")
            flat.extend(row)
        return cls(order, tuple(flat))

    @classmethod
    def identity(cls, order: int) -> "RationalMatrix":
        return cls.from_rows(
            [[Fraction(int(i == j)) for j in range(order)] for i in range(order)]
        )

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.order + j]

    def rows(self) -> list:
        n = self.order
        return [list(self.entries[i * n : (i + 1) * n]) for i in range(n)]

    def is_symmetric(self) -> bool:
        return all(
            self.entry(i, j) == self.entry(j, i)
            for i in range(self.order)
            for j in range(i + 1, self.order)
        )

    def leading(self, k: int) -> "RationalMatrix":
        """Top-left k-by-k submatrix."""
        if not 0 <= k <= self.order:
            raise ValueError("leading submatrix order out of range")
        return RationalMatrix.from_rows(
            [[self.entry(i, j) for j in range(k)] for i in range(k)]
        )

    def to_floats(self) -> list:
        return [[float(v) for v in row] for row in self.rows()]


def exact_det(matrix: RationalMatrix) -> Fraction:
    """Exact determinant by Bareiss fraction-free elimination.

    Row pivoting keeps the recurrence valid when a pivot vanishes; an empty
    matrix has determinant 1.
    """
    n = matrix.order
    if n == 0:
        return Fraction(1)
    a = matrix.rows()
    sign = 1
    prev = Fraction(1)
    for col in range(n - 1):
        if a[col][col] == 0:
            for r in range(col + 1, n):
                if a[r][col] != 0:
                    a[col], a[r] = a[r], a[col]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[col][col]
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                a[r][c] = (a[r][c] * pivot - a[r][col] * a[col][c]) / prev
            a[r][col] = Fraction(0)
        prev = pivot
    return sign * a[n - 1][n - 1]


def leading_principal_minors(matrix: RationalMatrix) -> tuple:
    """Determinants of the nested top-left submatrices of a symmetric matrix."""
    if not matrix.is_symmetric():
        raise ValueError("leading principal minors require a symmetric matrix")
    return tuple(exact_det(matrix.leading(k)) for k in range(1, matrix.order + 1))


def psd_pivots(matrix: RationalMatrix):
    """Exact semidefiniteness test by LDL^T with diagonal pivoting.

    Returns ``(is_psd, pivots, rank)``. At every step the largest remaining
    diagonal entry is chosen: a negative choice, or a vanishing one over a
    nonzero residual block, certifies that the matrix is not PSD.  For PSD
    input the positive pivots enumerate the rank.
    """
    if not matrix.is_symmetric():
        raise ValueError("matrix must be symmetric")
    n = matrix.order
    m = matrix.rows()
    perm = list(range(n))
    pivots = []
    for step in range(n):
        best = max(range(step, n), key=lambda t: m[perm[t]][perm[t]])
        d = m[perm[best]][perm[best]]
        if d < 0:
            return False, tuple(pivots), step
        if d == 0:
            for r in perm[step:]:
                for c in perm[step:]:
                    if m[r][c] != 0:
                        return False, tuple(pivots), step
            return True, tuple(pivots), step
        perm[step], perm[best] = perm[best], perm[step]
        p = perm[step]
        for r in perm[step + 1 :]:
            if m[r][p] == 0:
                continue
            f = m[r][p] / d
            for c in perm[step + 1 :]:
                m[r][c] = m[r][c] - f * m[p][c]
        pivots.append(d)
    return True, tuple(pivots), n
