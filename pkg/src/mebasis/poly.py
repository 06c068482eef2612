"""Sparse multivariate polynomials over exact rationals, bi-graded by
variable kind.

Every variable in a VarTable is tagged either magnetization ("mag") or
stress ("stress"); the bi-degree of a monomial is (degree in mag variables,
degree in stress variables).  The zero polynomial has no bi-degree, and
asking for the bi-degree of a non-bi-homogeneous polynomial is an error:
everything downstream works on bi-homogeneous pieces and mixing them up
silently would corrupt the reduction matrices.

The canonical monomial order used for printing and for coefficient-matrix
rows is graded lexicographic on the exponent vector (total degree first,
then the exponent tuple), highest first.  The printer and the parser round
trip: parse_polynomial(str(p), p.table) == p.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ratlinalg import RatMatrix

MAG = "mag"
STRESS = "stress"

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PolyError(Exception):
    pass


class NotBiHomogeneousError(PolyError):
    pass


class ZeroPolynomialError(PolyError):
    pass


class ParseError(PolyError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class VarTable:
    """Ordered variable list, each variable tagged mag or stress.

    The order fixes the exponent-vector layout of every monomial built on
    the table.  Tables compare by value (names and kinds).
    """

    __slots__ = ("names", "kinds", "_index", "_mag", "_stress")

    def __init__(self, variables: Iterable[tuple[str, str]]):
        pairs = tuple(variables)
        names = tuple(name for name, _ in pairs)
        kinds = tuple(kind for _, kind in pairs)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        for kind in kinds:
            if kind not in (MAG, STRESS):
                raise ValueError(f"unknown variable kind {kind!r}")
        self.names = names
        self.kinds = kinds
        self._index = {name: i for i, name in enumerate(names)}
        self._mag = tuple(i for i, k in enumerate(kinds) if k == MAG)
        self._stress = tuple(i for i, k in enumerate(kinds) if k == STRESS)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, VarTable)
                and self.names == other.names and self.kinds == other.kinds)

    def __hash__(self) -> int:
        return hash((self.names, self.kinds))

    def __repr__(self) -> str:
        body = ", ".join(f"{n}:{k}" for n, k in zip(self.names, self.kinds))
        return f"VarTable({body})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def monomial_bidegree(self, exponents: Sequence[int]) -> tuple[int, int]:
        return (sum(exponents[i] for i in self._mag),
                sum(exponents[i] for i in self._stress))


def monomial_key(exponents: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Graded lexicographic sort key: total degree, then exponent vector."""
    return (sum(exponents), exponents)


class Polynomial:
    """Immutable sparse polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable,
                 terms: Mapping[tuple[int, ...], Fraction | int]):
        width = len(table)
        clean: dict[tuple[int, ...], Fraction] = {}
        for mono, coeff in terms.items():
            mono = tuple(mono)
            if len(mono) != width or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono!r}")
            c = Fraction(coeff)
            if c:
                clean[mono] = c
        self.table = table
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, table: VarTable) -> "Polynomial":
        return cls(table, {})

    @classmethod
    def constant(cls, table: VarTable, value: Fraction | int) -> "Polynomial":
        return cls(table, {(0,) * len(table): Fraction(value)})

    @classmethod
    def variable(cls, table: VarTable, name: str) -> "Polynomial":
        exps = [0] * len(table)
        exps[table.index(name)] = 1
        return cls(table, {tuple(exps): Fraction(1)})

    # -- predicates and degrees -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (0 for the zero polynomial)."""
        if not self.terms:
            return Fraction(0)
        zero = (0,) * len(self.table)
        if set(self.terms) != {zero}:
            raise ValueError("polynomial is not constant")
        return self.terms[zero]

    def total_degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomialError("the zero polynomial has no degree")
        return max(sum(m) for m in self.terms)

    def bidegree(self) -> tuple[int, int]:
        """Common (mag, stress) bi-degree of every term.

        Raises ZeroPolynomialError on the zero polynomial and
        NotBiHomogeneousError when terms disagree.
        """
        if not self.terms:
            raise ZeroPolynomialError("the zero polynomial has no bi-degree")
        degs = {self.table.monomial_bidegree(m) for m in self.terms}
        if len(degs) > 1:
            raise NotBiHomogeneousError(f"mixed bi-degrees {sorted(degs)}")
        return degs.pop()

    def is_bihomogeneous(self) -> bool:
        if not self.terms:
            return True
        return len({self.table.monomial_bidegree(m) for m in self.terms}) == 1

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.table, other)
        if isinstance(other, Polynomial):
            if self.table != other.table:
                raise ValueError("polynomials built on different variable tables")
            return other
        return None

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            s = terms.get(mono, Fraction(0)) + c
            if s:
                terms[mono] = s
            else:
                terms.pop(mono, None)
        return Polynomial(self.table, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Polynomial(self.table, {m: c * v for m, v in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.table != other.table:
            raise ValueError("polynomials built on different variable tables")
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(mono, Fraction(0)) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Polynomial(self.table, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(self.table, 1)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Polynomial)
                and self.table == other.table and self.terms == other.terms)

    __hash__ = None  # mutable term map inside

    # -- evaluation ------------------------------------------------------

    def evaluate(self, point: Mapping[str, Fraction | int]) -> Fraction:
        """Exact value at a rational point.

        Every variable that actually occurs in a term must be assigned;
        extra assignments are ignored.
        """
        resolved: dict[int, Fraction] = {}
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            v = coeff
            for i, e in enumerate(mono):
                if not e:
                    continue
                if i not in resolved:
                    name = self.table.names[i]
                    if name not in point:
                        raise ValueError(f"no value for variable {name!r}")
                    resolved[i] = Fraction(point[name])
                v *= resolved[i] ** e
            total += v
        return total

    # -- printing --------------------------------------------------------

    def sorted_monomials(self) -> list[tuple[int, ...]]:
        return sorted(self.terms, key=monomial_key, reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for mono in self.sorted_monomials():
            coeff = self.terms[mono]
            factors = []
            for name, e in zip(self.table.names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else "-" + body)
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def coefficient_matrix(polys: Sequence[Polynomial]) -> tuple[list[tuple[int, ...]], RatMatrix]:
    """Monomial list and coefficient matrix of bi-homogeneous polynomials.

    All inputs must share a VarTable and one common bi-degree.  Rows follow
    the canonical monomial order (graded lex, highest first); column j
    reconstructs polys[j] as sum_i A[i][j] * monomial_i.
    """
    if not polys:
        raise ValueError("need at least one polynomial")
    table = polys[0].table
    degs = set()
    for p in polys:
        if p.table != table:
            raise ValueError("polynomials built on different variable tables")
        degs.add(p.bidegree())
    if len(degs) > 1:
        raise ValueError(f"polynomials of mixed bi-degree {sorted(degs)}")
    monos = sorted({m for p in polys for m in p.terms}, key=monomial_key, reverse=True)
    rows = [[p.terms.get(m, Fraction(0)) for p in polys] for m in monos]
    return monos, RatMatrix(rows, cols=len(polys))


# -- parser --------------------------------------------------------------
#
# expr    := term (('+' | '-') term)*
# term    := factor ('*' factor)*
# factor  := '-' factor | base
# base    := atom ('^' uint)?
# atom    := rational | identifier | '(' expr ')'
# rational:= uint ('/' uint)?
#
# No implicit multiplication; '/' only between integer literals.

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()/])")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, table: VarTable):
        self.table = table
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            if value == "/":
                raise ParseError("'/' is only allowed between integer literals", pos)
            raise ParseError(f"unexpected {value!r}", pos)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                q = self.term()
                p = p + q if value == "+" else p - q
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Polynomial:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return -self.factor()
        return self.base()

    def base(self) -> Polynomial:
        p = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            nkind, nvalue, npos = self.advance()
            if nkind != "int":
                raise ParseError("exponent must be a nonnegative integer", npos)
            p = p ** int(nvalue)
        return p

    def atom(self) -> Polynomial:
        kind, value, pos = self.advance()
        if kind == "int":
            num = int(value)
            nkind, nvalue, _ = self.peek()
            if nkind == "op" and nvalue == "/":
                self.advance()
                dkind, dvalue, dpos = self.advance()
                if dkind != "int":
                    raise ParseError("denominator must be an integer literal", dpos)
                den = int(dvalue)
                if den == 0:
                    raise ParseError("zero denominator", dpos)
                return Polynomial.constant(self.table, Fraction(num, den))
            return Polynomial.constant(self.table, num)
        if kind == "name":
            if value not in self.table.names:
                raise ParseError(f"unknown variable {value!r}", pos)
            return Polynomial.variable(self.table, value)
        if kind == "op" and value == "(":
            p = self.expr()
            ckind, cvalue, cpos = self.advance()
            if not (ckind == "op" and cvalue == ")"):
                raise ParseError("expected ')'", cpos)
            return p
        raise ParseError(f"unexpected {value!r}" if value else "unexpected end of input", pos)


def parse_polynomial(text: str, table: VarTable) -> Polynomial:
    """Parse an expression in the grammar above into a Polynomial."""
    return _Parser(text, table).parse()
