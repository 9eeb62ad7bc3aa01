"""Exact integer and rational matrices.

:class:`IntMatrix` is a group element of GL(n, Z) (determinant +-1 is checked
on construction).  Unipotent elements have a terminating logarithm series,
which is how rank-2 abelian subgroups of unipotents are certified: for
commuting unipotents m1, m2, ``m1^p m2^q = I`` iff ``p log m1 + q log m2 = 0``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from commgraph.engine import GroupElement, ByteReader, check_same_engine, encode_int, encode_uint, register_decoder


class NotUnipotent(ValueError):
    pass


# -- plain row-tuple helpers (no unimodularity requirement) ----------------


def _identity_rows(n, one=1):
    return tuple(tuple(one if i == j else 0 * one for j in range(n)) for i in range(n))


def mat_mul(a, b):
    if len(a[0]) != len(b):
        raise ValueError("dimension mismatch")
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a, s):
    return tuple(tuple(s * x for x in row) for row in a)


def is_zero(a) -> bool:
    return all(x == 0 for row in a for x in row)


def determinant(rows) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows]
    n = len(m)
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
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def rank(rows) -> int:
    """Rank over Q."""
    m = [[Fraction(x) for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


class IntMatrix(GroupElement):
    """Invertible n x n integer matrix.

    Payload: uint n, then the n*n entries row-major as ints.
    """

    engine = "matrix"
    __slots__ = ("rows", "n")

    def __init__(self, rows):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and non-empty")
        if determinant(rows) not in (1, -1):
            raise ValueError("matrix is not unimodular (det != +-1)")
        self.rows = rows
        self.n = n

    @classmethod
    def _trusted(cls, rows):
        m = cls.__new__(cls)
        m.rows, m.n = rows, len(rows)
        return m

    @classmethod
    def identity_of(cls, n: int) -> IntMatrix:
        return cls._trusted(_identity_rows(n))

    def _canon(self):
        return self.rows

    def __mul__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return multiply(self, other)

    def inverse(self):
        return inverse(self)

    def identity(self):
        return IntMatrix.identity_of(self.n)

    def det(self) -> int:
        return determinant(self.rows)

    def payload(self) -> bytes:
        return encode_uint(self.n) + b"".join(encode_int(x) for row in self.rows for x in row)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.rows]})"


class RatMatrix:
    """Square matrix of Fractions (lowest terms by construction)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(Fraction(x) for x in r) for r in rows)

    @property
    def n(self):
        return len(self.rows)

    def __eq__(self, other):
        if isinstance(other, RatMatrix):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other):
        return RatMatrix(mat_add(self.rows, other.rows))

    def __mul__(self, s):
        return RatMatrix(mat_scale(self.rows, Fraction(s)))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return is_zero(self.rows)

    def flat(self):
        return [x for row in self.rows for x in row]

    def to_strings(self):
        return [[str(x) for x in row] for row in self.rows]

    @classmethod
    def from_strings(cls, rows):
        return cls([[Fraction(x) for x in row] for row in rows])

    def __repr__(self):
        return f"RatMatrix({self.to_strings()})"


def multiply(m1: IntMatrix, m2: IntMatrix) -> IntMatrix:
    check_same_engine(m1, m2)
    if m1.n != m2.n:
        raise ValueError("dimension mismatch")
    return IntMatrix._trusted(mat_mul(m1.rows, m2.rows))


def inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix via Gauss-Jordan over Q."""
    n = m.n
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.rows)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        a[c], a[pivot] = a[pivot], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = [row[n:] for row in a]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not invertible over the integers")
    return IntMatrix._trusted(tuple(tuple(int(x) for x in row) for row in out))


def elementary(n: int, i: int, j: int, s: int = 1) -> IntMatrix:
    """I + s e_ij with 1-based indices."""
    if i == j:
        raise ValueError("elementary matrix needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("index out of range")
    rows = [list(r) for r in _identity_rows(n)]
    rows[i - 1][j - 1] = s
    return IntMatrix(rows)


def heisenberg_generators() -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Unitriangular model: a = I+e12, b = I+e23, c = I+e13, with [a,b] = c."""
    return elementary(3, 1, 2), elementary(3, 2, 3), elementary(3, 1, 3)


def _nilpotent_part(m: IntMatrix):
    return tuple(tuple(x - (i == j) for j, x in enumerate(row)) for i, row in enumerate(m.rows))


def is_unipotent(m: IntMatrix) -> bool:
    nil = _nilpotent_part(m)
    p = nil
    for _ in range(m.n - 1):
        p = mat_mul(p, nil)
    return is_zero(p)


def unipotent_log(m: IntMatrix) -> RatMatrix:
    """log m = sum_{k>=1} (-1)^(k+1) (m - I)^k / k, a finite sum for unipotent m."""
    if not is_unipotent(m):
        raise NotUnipotent(f"(m - I)^{m.n} != 0; m is not unipotent: {m!r}")
    nil = _nilpotent_part(m)
    total = tuple(tuple(Fraction(0) for _ in range(m.n)) for _ in range(m.n))
    p = nil
    k = 1
    while not is_zero(p):
        total = mat_add(total, mat_scale(p, Fraction((-1) ** (k + 1), k)))
        p = mat_mul(p, nil)
        k += 1
    return RatMatrix(total)


def matrix_exp(log: RatMatrix) -> RatMatrix:
    """exp of a nilpotent rational matrix (finite series)."""
    n = log.n
    total = _identity_rows(n, Fraction(1))
    p = total
    for k in range(1, n + 1):
        p = mat_mul(p, log.rows)
        if is_zero(p):
            break
        total = mat_add(total, mat_scale(p, Fraction(1, factorial(k))))
    return RatMatrix(total)


def logs_independent(l1: RatMatrix, l2: RatMatrix) -> bool:
    return rank([l1.flat(), l2.flat()]) == 2


def independent_logs(m1: IntMatrix, m2: IntMatrix) -> bool:
    """Whether commuting unipotents m1, m2 generate a free abelian group of rank 2."""
    check_same_engine(m1, m2)
    if m1 * m2 != m2 * m1:
        raise ValueError("matrices do not commute")
    return logs_independent(unipotent_log(m1), unipotent_log(m2))


def format_matrix(m) -> list[list[str]]:
    rows = m.rows if hasattr(m, "rows") else m
    return [[str(x) for x in row] for row in rows]


def _decode_matrix(reader: ByteReader) -> IntMatrix:
    n = reader.uint()
    if n * n > reader.remaining():
        raise ValueError("dimension exceeds payload")
    if n == 0:
        raise ValueError("zero-dimensional matrix")
    return IntMatrix([[reader.int() for _ in range(n)] for _ in range(n)])


register_decoder("matrix", _decode_matrix)
