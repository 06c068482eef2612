"""3-vectors and 3x3 matrices with polynomial entries.

Carries the two diagonal/off-diagonal projectors used throughout the
invariant catalog:

  dbar(a)  zeroes the diagonal (keeps the off-diagonal part),
  ddev(a)  keeps the diagonal of the deviator (subtracts tr(a)/3 from each
           diagonal entry, zeroes the off-diagonal part).

For symmetric a these reconstruct a as ddev(a) + dbar(a) + (tr(a)/3) * id,
and both maps are idempotent and mutually annihilating.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .poly import Polynomial, VarTable


class PolyVec3:
    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Polynomial]):
        entries = tuple(entries)
        if len(entries) != 3:
            raise ValueError("need exactly 3 entries")
        t = entries[0].table
        if any(e.table != t for e in entries):
            raise ValueError("entries built on different variable tables")
        self.entries = entries

    @property
    def table(self) -> VarTable:
        return self.entries[0].table

    def __getitem__(self, i: int) -> Polynomial:
        return self.entries[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyVec3) and self.entries == other.entries

    __hash__ = None

    def dot(self, other: "PolyVec3") -> Polynomial:
        return sum((self.entries[i] * other.entries[i] for i in range(3)),
                   Polynomial.zero(self.table))

    def __repr__(self) -> str:
        return "PolyVec3(%s)" % ", ".join(str(e) for e in self.entries)


class PolyMat3:
    __slots__ = ("entries",)

    def __init__(self, rows: Iterable[Iterable[Polynomial]]):
        rows = tuple(tuple(r) for r in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("need a 3x3 entry grid")
        t = rows[0][0].table
        if any(e.table != t for r in rows for e in r):
            raise ValueError("entries built on different variable tables")
        self.entries = rows

    @property
    def table(self) -> VarTable:
        return self.entries[0][0].table

    def __getitem__(self, i: int) -> tuple[Polynomial, ...]:
        return self.entries[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyMat3) and self.entries == other.entries

    __hash__ = None

    def __add__(self, other: "PolyMat3") -> "PolyMat3":
        return PolyMat3([[self.entries[i][j] + other.entries[i][j]
                          for j in range(3)] for i in range(3)])

    def __sub__(self, other: "PolyMat3") -> "PolyMat3":
        return PolyMat3([[self.entries[i][j] - other.entries[i][j]
                          for j in range(3)] for i in range(3)])

    def __matmul__(self, other: "PolyMat3") -> "PolyMat3":
        a, b = self.entries, other.entries
        return PolyMat3([[sum((a[i][k] * b[k][j] for k in range(3)),
                              Polynomial.zero(self.table))
                          for j in range(3)] for i in range(3)])

    def scale(self, c: Polynomial | Fraction | int) -> "PolyMat3":
        return PolyMat3([[self.entries[i][j] * c for j in range(3)] for i in range(3)])

    def power(self, n: int) -> "PolyMat3":
        if n < 1:
            raise ValueError("power expects n >= 1")
        out = self
        for _ in range(n - 1):
            out = out @ self
        return out

    def trace(self) -> Polynomial:
        e = self.entries
        return e[0][0] + e[1][1] + e[2][2]

    def transpose(self) -> "PolyMat3":
        return PolyMat3([[self.entries[j][i] for j in range(3)] for i in range(3)])

    def is_symmetric(self) -> bool:
        e = self.entries
        return e[0][1] == e[1][0] and e[0][2] == e[2][0] and e[1][2] == e[2][1]

    def mul_vec(self, v: PolyVec3) -> PolyVec3:
        return PolyVec3([sum((self.entries[i][j] * v[j] for j in range(3)),
                             Polynomial.zero(self.table)) for i in range(3)])

    def __repr__(self) -> str:
        return "PolyMat3(%s)" % "; ".join(
            ", ".join(str(e) for e in row) for row in self.entries)


def zero_matrix(table: VarTable) -> PolyMat3:
    z = Polynomial.zero(table)
    return PolyMat3([[z, z, z] for _ in range(3)])


def identity(table: VarTable) -> PolyMat3:
    z = Polynomial.zero(table)
    one = Polynomial.constant(table, 1)
    return PolyMat3([[one if i == j else z for j in range(3)] for i in range(3)])


def outer(v: PolyVec3) -> PolyMat3:
    return PolyMat3([[v[i] * v[j] for j in range(3)] for i in range(3)])


def double_contract(a: PolyMat3, b: PolyMat3) -> Polynomial:
    return sum((a[i][j] * b[i][j] for i in range(3) for j in range(3)),
               Polynomial.zero(a.table))


def dbar(a: PolyMat3) -> PolyMat3:
    z = Polynomial.zero(a.table)
    return PolyMat3([[z if i == j else a[i][j] for j in range(3)] for i in range(3)])


def ddev(a: PolyMat3) -> PolyMat3:
    z = Polynomial.zero(a.table)
    third = Fraction(1, 3) * a.trace()
    return PolyMat3([[a[i][i] - third if i == j else z
                      for j in range(3)] for i in range(3)])


def cubic_split(a: PolyMat3) -> tuple[PolyMat3, PolyMat3, Polynomial]:
    """Split a symmetric matrix into (ddev(a), dbar(a), tr(a))."""
    if not a.is_symmetric():
        raise ValueError("cubic split expects a symmetric matrix")
    return ddev(a), dbar(a), a.trace()
