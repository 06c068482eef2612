"""Exact dense linear algebra over the rationals.

Small matrices only (tens of rows and columns): plain Gauss-Jordan on
`fractions.Fraction` entries is exact and fast enough here, and Fraction
keeps every intermediate value normalized, so there is no coefficient
blow-up to manage.  The outputs that downstream code relies on are the
reduced row echelon form, the rank, and a *canonical* kernel basis: one
vector per free column, free columns taken in ascending order, each vector
scaled to coprime integer entries whose first nonzero entry is positive.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def normalize_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, first nonzero entry > 0.

    The zero vector is returned unchanged (as integer zeros).
    """
    den = 1
    for x in v:
        den = _lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


class RatMatrix:
    """Dense matrix of Fractions, row-major."""

    __slots__ = ("data", "rows", "cols")

    def __init__(self, rows: Iterable[Sequence[Fraction | int]], cols: int | None = None):
        data = [tuple(Fraction(x) for x in row) for row in rows]
        widths = {len(r) for r in data}
        if len(widths) > 1:
            raise ValueError("ragged rows")
        self.data = data
        self.rows = len(data)
        if data:
            self.cols = widths.pop()
            if cols is not None and cols != self.cols:
                raise ValueError("cols does not match row width")
        else:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            self.cols = cols

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.data)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def mul_vector(self, v: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum((row[j] * v[j] for j in range(self.cols)), Fraction(0))
                     for row in self.data)

    def rref(self) -> tuple["RatMatrix", tuple[int, ...]]:
        """Reduced row echelon form and the tuple of pivot columns.

        Pivot selection is the first nonzero entry scanning rows downward,
        columns left to right.  Deterministic by construction.
        """
        m = [list(row) for row in self.data]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            if r == len(m):
                break
            pr = next((i for i in range(r, len(m)) if m[i][c]), None)
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            pv = m[r][c]
            if pv != 1:
                m[r] = [x / pv for x in m[r]]
            for i in range(len(m)):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return RatMatrix(m, cols=self.cols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list[tuple[int, ...]]:
        """Canonical basis of the right kernel, one vector per free column.

        Free columns are visited in ascending order; the vector for free
        column f solves the pivot variables in terms of x_f = 1 and is then
        normalized to coprime integers with positive leading entry.
        """
        return [vec for _, vec in self.kernel_basis_with_free()]

    def kernel_basis_with_free(self) -> list[tuple[int, tuple[int, ...]]]:
        """Like kernel_basis, but pairs each vector with its free column."""
        rrefm, pivots = self.rref()
        pivot_set = set(pivots)
        out = []
        for f in range(self.cols):
            if f in pivot_set:
                continue
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for r, p in enumerate(pivots):
                if rrefm.data[r][f]:
                    v[p] = -rrefm.data[r][f]
            out.append((f, normalize_integer_vector(v)))
        return out


def matrix_from_columns(columns: Sequence[Sequence[Fraction | int]], nrows: int) -> RatMatrix:
    return RatMatrix([[Fraction(col[i]) for col in columns] for i in range(nrows)],
                     cols=len(columns))


def rank_of_columns(columns: Sequence[Sequence[Fraction | int]], nrows: int) -> int:
    if not columns:
        return 0
    return matrix_from_columns(columns, nrows).rank()


def solve_columns(columns: Sequence[Sequence[Fraction | int]],
                  target: Sequence[Fraction | int]) -> list[Fraction] | None:
    """Express target as a linear combination of the given columns.

    Returns the coefficient list with every free coefficient set to zero
    (the RREF particular solution), or None when target is outside the span.
    """
    nrows = len(target)
    for col in columns:
        if len(col) != nrows:
            raise ValueError("column length does not match target length")
    aug = RatMatrix(
        [[Fraction(col[i]) for col in columns] + [Fraction(target[i])] for i in range(nrows)],
        cols=len(columns) + 1,
    )
    rrefm, pivots = aug.rref()
    n = len(columns)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = rrefm.data[r][n]
    return x
