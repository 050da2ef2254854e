"""Matrices over the polynomial ring and over the rationals.

Determinants of polynomial matrices use fraction-free Bareiss elimination
(every division is exact).  Characteristic polynomials of rational matrices
use the Faddeev–LeVerrier recurrence.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .poly import Polynomial, StructuralError, VarTable


class PolyMatrix:
    """Dense matrix of polynomials over one variable table."""

    def __init__(self, vars: VarTable, rows: int, cols: int, entries: Sequence[Polynomial]):
        entries = list(entries)
        if len(entries) != rows * cols:
            raise StructuralError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        for e in entries:
            if e.vars != vars:
                raise StructuralError("matrix entries live over different tables")
        self.vars = vars
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, vars: VarTable, rows: Sequence[Sequence]) -> "PolyMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise StructuralError("ragged rows")
            flat.extend(e if isinstance(e, Polynomial) else vars.const(e) for e in r)
        return cls(vars, len(rows), ncols, flat)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.vars, self.cols, self.rows,
                          [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.vars, len(rows), len(cols),
                          [self[i, j] for i in rows for j in cols])

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.vars, self.rows, self.cols, [fn(e) for e in self.entries])

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __repr__(self):
        body = "; ".join(", ".join(map(str, self.row(i))) for i in range(self.rows))
        return f"PolyMatrix({self.rows}x{self.cols}: [{body}])"


def det(M: PolyMatrix) -> Polynomial:
    """Bareiss fraction-free determinant."""
    if M.rows != M.cols:
        raise StructuralError(f"determinant of a non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return M.vars.one()
    a = [list(r) for r in M.to_rows()]
    sign = 1
    prev = M.vars.one()
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return M.vars.zero()
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = piv * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num if prev.is_constant() and prev.constant_value() == 1 \
                    else num.exact_div(prev)
        prev = piv
    return a[n - 1][n - 1] * sign


def minors(M: PolyMatrix, k: int) -> list[Polynomial]:
    """All ``k x k`` minors, enumerated lexicographically by (rows, cols).

    ``k = 0`` gives ``[1]``; ``k`` above either dimension gives ``[]``.
    """
    if k < 0:
        raise ValueError("minor size must be non-negative")
    if k == 0:
        return [M.vars.one()]
    if k > min(M.rows, M.cols):
        return []
    out = []
    for rs in combinations(range(M.rows), k):
        for cs in combinations(range(M.cols), k):
            out.append(det(M.submatrix(rs, cs)))
    return out


def nonzero_minors(M: PolyMatrix, k: int) -> list[Polynomial]:
    return [m for m in minors(M, k) if not m.is_zero()]


# ------------------------------------------------------ rational matrices

class RationalMatrix:
    """Square matrix of exact rationals."""

    def __init__(self, rows: Sequence[Sequence]):
        rows = [[Fraction(x) for x in r] for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise StructuralError("rational matrix must be square")
        self.rows = rows
        self.n = n

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        n = self.n
        B = other.rows
        return RationalMatrix([[sum(self.rows[i][k] * B[k][j] for k in range(n))
                                for j in range(n)] for i in range(n)])

    def __add__(self, other):
        return RationalMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> "RationalMatrix":
        return RationalMatrix([[c * a for a in r] for r in self.rows])

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.n)), Fraction(0))

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"RationalMatrix({[[str(a) for a in r] for r in self.rows]})"


def charpoly_coeffs(M: RationalMatrix) -> list[Fraction]:
    """Coefficients ``c_0..c_n`` (low to high) of ``det(λI - M)``; ``c_n = 1``."""
    n = M.n
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    if n == 0:
        return coeffs
    Mk = RationalMatrix([[0] * n for _ in range(n)])
    ident = RationalMatrix.identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        Mk = M @ (Mk + ident.scale(c))
        c = -Mk.trace() / k
        coeffs[n - k] = c
    return coeffs


LAMBDA = VarTable(("lam",))


def charpoly(M: RationalMatrix, var: str = "lam") -> Polynomial:
    vars = LAMBDA if var == "lam" else VarTable((var,))
    return Polynomial(vars, {(i,): c for i, c in enumerate(charpoly_coeffs(M)) if c})


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over the rationals by Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, m):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                for j in range(c, n):
                    a[i][j] -= f * a[r][j]
        r += 1
        if r == m:
            break
    return r


def rational_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return d
