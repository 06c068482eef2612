"""Bi-graded reduction of a restricted invariant basis.

The engine walks target bi-degrees (a, b) in degree-lexicographic order
(total degree first, then magnetization degree) up to the bounds
(max total degree, max magnetization degree).  At each target it assembles
one column per reducible product (a multiset of two or more surviving
invariant names whose bi-degrees sum to the target) and one column per
surviving invariant of that exact bi-degree, builds the exact coefficient
matrix over the shared monomials, and reads off the kernel.

Every kernel vector is an exact linear relation.  A vector supported only
on product columns is a syzygy between products of lower-degree invariants;
it is reported but eliminates nothing.  Each remaining kernel dimension
eliminates one same-bi-degree invariant.  Which ones survive is decided by
the selection policy; for every eliminated invariant the engine solves its
column over the product columns plus the kept columns, giving a relation in
solved form with coprime integer coefficients.

The default bounds (7, 6) cover every product of catalog entries that can
match a catalog bi-degree; raising them only adds empty targets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Mapping, Sequence

from .catalog import CATALOG_INDEX
from .poly import Polynomial, coefficient_matrix
from .ratlinalg import rank_of_columns, solve_columns
from .restriction import RestrictedBasis

DEFAULT_BOUNDS = (7, 6)
POLICIES = ("paper", "table-order", "reverse-table-order")

# Pinned survivor lists for the built-in fibers under the default policy.
# Validated on every run: the engine checks that each pinned set spans the
# restricted basis at every bi-degree and contains no redundant member, and
# fails loudly otherwise.
PINNED_GENERATORS: Mapping[str, tuple[str, ...]] = {
    "theta": ("I010", "I002", "I020", "I200", "I201", "I210", "I400"),
    "alpha_prime": ("I010", "I002", "I020", "I003", "I030", "I200", "I201",
                    "I210", "I202a", "I211", "I220", "I400", "I401", "I410",
                    "I600"),
    "gamma": ("I010", "I020", "I030", "I200", "I210", "I220", "I410", "I600"),
}


class ReductionError(Exception):
    pass


class PolicyConflictError(ReductionError):
    """A selection policy asked for a keep set that cannot work."""


class RelationIntegrityError(ReductionError):
    """A relation failed exact re-substitution; indicates a bug, never input."""


def deglex_key(bidegree: tuple[int, int]) -> tuple[int, int, int]:
    a, b = bidegree
    return (a + b, a, b)


def _catalog_order(names) -> tuple[str, ...]:
    return tuple(sorted(names, key=CATALOG_INDEX.__getitem__))


def _product_str(factors: Sequence[str]) -> str:
    out = []
    i = 0
    while i < len(factors):
        j = i
        while j < len(factors) and factors[j] == factors[i]:
            j += 1
        out.append(factors[i] if j - i == 1 else f"{factors[i]}^{j - i}")
        i = j
    return "*".join(out)


@dataclass(frozen=True)
class Relation:
    """An exact linear relation sum_k c_k * prod_k = 0.

    terms maps sorted factor-name tuples to coprime integer coefficients.
    When solved_for is set, that invariant appears in exactly one term, as a
    bare factor with positive coefficient, and solved_str renders the
    relation solved for it.
    """
    bidegree: tuple[int, int]
    terms: tuple[tuple[tuple[str, ...], int], ...]
    solved_for: str | None = None

    def _solved_index(self) -> int:
        for i, (factors, _) in enumerate(self.terms):
            if factors == (self.solved_for,):
                return i
        raise ValueError(f"solved term {self.solved_for!r} not present")

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for factors, coeff in self.terms:
            prod = Fraction(coeff)
            for f in factors:
                prod *= values[f]
            total += prod
        return total

    def substitute(self, polys: Mapping[str, Polynomial]) -> Polynomial:
        table = next(iter(polys.values())).table
        total = Polynomial.zero(table)
        for factors, coeff in self.terms:
            prod = Polynomial.constant(table, coeff)
            for f in factors:
                prod = prod * polys[f]
            total = total + prod
        return total

    def equation_str(self) -> str:
        parts = []
        for factors, coeff in self.terms:
            mag = abs(coeff)
            body = _product_str(factors) if mag == 1 else f"{mag}*{_product_str(factors)}"
            if not parts:
                parts.append(body if coeff > 0 else "-" + body)
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        return " ".join(parts) + " = 0"

    def solved_str(self) -> str:
        if self.solved_for is None:
            raise ValueError("relation has no solved-for invariant")
        i = self._solved_index()
        lead = self.terms[i][1]
        sign = 1 if lead > 0 else -1
        rhs = [(factors, -sign * coeff) for j, (factors, coeff) in enumerate(self.terms)
               if j != i]
        parts = []
        for factors, coeff in rhs:
            mag = abs(coeff)
            body = _product_str(factors) if mag == 1 else f"{mag}*{_product_str(factors)}"
            if not parts:
                parts.append(body if coeff > 0 else "-" + body)
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        body = " ".join(parts) if parts else "0"
        if abs(lead) == 1:
            return f"{self.solved_for} = {body}"
        return f"{self.solved_for} = 1/{abs(lead)}*({body})"


@dataclass(frozen=True)
class BidegreeReport:
    bidegree: tuple[int, int]
    n_products: int
    n_invariants: int
    rank: int
    kernel_dim: int
    kept: tuple[str, ...]
    eliminated: tuple[str, ...]
    n_syzygies: int

    @property
    def n_columns(self) -> int:
        return self.n_products + self.n_invariants


@dataclass(frozen=True)
class ReductionResult:
    basis: RestrictedBasis
    policy: str
    effective_policy: str
    bounds: tuple[int, int]
    generators: tuple[str, ...]
    relations: tuple[Relation, ...]
    syzygies: tuple[Relation, ...]
    vanished: tuple[str, ...]
    reports: tuple[BidegreeReport, ...]


def survivor_info(rb: RestrictedBasis) -> list[tuple[str, Polynomial, tuple[int, int]]]:
    return [(name, p, p.bidegree()) for name, p in rb.entries]


def partition_bidegrees(rb: RestrictedBasis) -> list[tuple[tuple[int, int], tuple[str, ...]]]:
    """Surviving invariant names grouped by bi-degree, deglex ascending."""
    groups: dict[tuple[int, int], list[str]] = {}
    for name, _, bd in survivor_info(rb):
        groups.setdefault(bd, []).append(name)
    return [(bd, tuple(groups[bd])) for bd in sorted(groups, key=deglex_key)]


def enumerate_products(items: Sequence[tuple[str, Polynomial, tuple[int, int]]],
                       target: tuple[int, int],
                       min_factors: int = 2) -> list[tuple[tuple[str, ...], Polynomial]]:
    """Multisets of at least min_factors items whose bi-degrees sum to target.

    Output order is lexicographic by the sorted factor-name tuple.  The
    polynomial attached to each multiset is the product of the members'
    polynomials; products of nonzero polynomials never vanish, so every
    column this produces is usable.
    """
    pool = sorted(items, key=lambda it: it[0])
    out: list[tuple[tuple[str, ...], Polynomial]] = []
    factors: list[str] = []

    def rec(start: int, remaining: tuple[int, int], poly: Polynomial | None) -> None:
        ra, rb_ = remaining
        if ra == 0 and rb_ == 0:
            if len(factors) >= min_factors:
                out.append((tuple(factors), poly))
            return
        for idx in range(start, len(pool)):
            name, p, (a, b) = pool[idx]
            if a <= ra and b <= rb_:
                factors.append(name)
                rec(idx, (ra - a, rb_ - b), p if poly is None else poly * p)
                factors.pop()

    rec(0, target, None)
    return out


def reducible_products(rb: RestrictedBasis,
                       target: tuple[int, int]) -> list[tuple[tuple[str, ...], Polynomial]]:
    """Products of two or more surviving invariants with bi-degree sum target."""
    return enumerate_products(survivor_info(rb), target, min_factors=2)


def bidegree_grid(bounds: tuple[int, int] = DEFAULT_BOUNDS) -> Iterator[tuple[int, int]]:
    """All bi-degrees with total degree 1..dmax and mag degree <= amax,
    in degree-lexicographic order."""
    dmax, amax = bounds
    for k in range(1, dmax + 1):
        for a in range(0, min(amax, k) + 1):
            yield (a, k - a)


def _normalize_relation(bidegree: tuple[int, int],
                        raw_terms: Sequence[tuple[tuple[str, ...], Fraction]],
                        solved_for: str | None) -> Relation:
    """Clear denominators, divide by the gcd, fix the sign convention.

    The positive-sign anchor is the solved-for term when present, otherwise
    the first nonzero term.
    """
    terms = [(f, c) for f, c in raw_terms if c]
    den = 1
    for _, c in terms:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [(f, int(c * den)) for f, c in terms]
    g = 0
    for _, c in ints:
        g = gcd(g, c)
    if g > 1:
        ints = [(f, c // g) for f, c in ints]
    if solved_for is not None:
        anchor = next(c for f, c in ints if f == (solved_for,))
    else:
        anchor = ints[0][1]
    if anchor < 0:
        ints = [(f, -c) for f, c in ints]
    return Relation(bidegree, tuple(ints), solved_for)


def _verify_relation(rel: Relation, restricted: Mapping[str, Polynomial]) -> None:
    if not rel.substitute(restricted).is_zero():
        raise RelationIntegrityError(
            f"relation at {rel.bidegree} does not substitute to zero: "
            f"{rel.equation_str()}")


def relations_at(rb: RestrictedBasis, target: tuple[int, int]) -> list[Relation]:
    """All independent linear relations among products and invariants at one
    target bi-degree, from the canonical kernel basis.

    The column order is reducible products (lexicographic by factor names)
    followed by same-bi-degree invariants (catalog order).  A relation whose
    kernel vector is free on an invariant column carries that invariant as
    solved_for; a vector free on a product column is a pure syzygy.
    """
    prods = reducible_products(rb, target)
    restricted = rb.as_dict()
    invs = [name for bd, names in partition_bidegrees(rb) if bd == target
            for name in names]
    labels = [factors for factors, _ in prods] + [(n,) for n in invs]
    polys = [p for _, p in prods] + [restricted[n] for n in invs]
    if not polys:
        return []
    _, mat = coefficient_matrix(polys)
    out = []
    n_prods = len(prods)
    for free_col, vec in mat.kernel_basis_with_free():
        raw = [(labels[j], Fraction(vec[j])) for j in range(len(labels)) if vec[j]]
        solved = invs[free_col - n_prods] if free_col >= n_prods else None
        rel = _normalize_relation(target, raw, solved)
        _verify_relation(rel, restricted)
        out.append(rel)
    return out


def _select_kept(policy: str, pinned: tuple[str, ...] | None, invs: Sequence[str],
                 inv_cols: Mapping[str, tuple], base_cols: list, base_rank: int,
                 nrows: int) -> tuple[str, ...]:
    """Names to keep at one bi-degree, in catalog order."""
    if pinned is not None:
        return tuple(n for n in invs if n in pinned)
    order = list(invs) if policy == "table-order" else list(reversed(invs))
    kept: list[str] = []
    cols = list(base_cols)
    r = base_rank
    for n in order:
        trial = cols + [inv_cols[n]]
        tr = rank_of_columns(trial, nrows)
        if tr > r:
            kept.append(n)
            cols = trial
            r = tr
    return tuple(n for n in invs if n in kept)


def reduce_basis(rb: RestrictedBasis, bounds: tuple[int, int] = DEFAULT_BOUNDS,
                 policy: str = "paper") -> ReductionResult:
    """Run the full reduction: returns survivors, solved relations,
    syzygies and a per-bi-degree account.

    policy "paper" uses the pinned survivor lists for the built-in fibers
    (validated, never trusted) and falls back to "table-order" greedy
    selection for any other substitution.  "table-order" keeps the earliest
    catalog entry not already spanned; "reverse-table-order" walks the
    catalog backwards.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    pinned = None
    effective = policy
    if policy == "paper":
        pinned = PINNED_GENERATORS.get(rb.substitution.name)
        if pinned is None:
            effective = "table-order"

    restricted = rb.as_dict()
    partition = dict(partition_bidegrees(rb))
    generators: list[str] = []
    relations: list[Relation] = []
    syzygies: list[Relation] = []
    reports: list[BidegreeReport] = []

    for bd in bidegree_grid(bounds):
        prods = reducible_products(rb, bd)
        invs = list(partition.get(bd, ()))
        if not prods and not invs:
            continue
        labels = [factors for factors, _ in prods] + [(n,) for n in invs]
        polys = [p for _, p in prods] + [restricted[n] for n in invs]
        _, mat = coefficient_matrix(polys)
        _, pivots = mat.rref()
        rank = len(pivots)
        n_prods = len(prods)
        nrows = mat.rows
        kernel = mat.kernel_basis_with_free()

        syz_here = []
        for free_col, vec in kernel:
            if free_col < n_prods:
                raw = [(labels[j], Fraction(vec[j])) for j in range(len(labels)) if vec[j]]
                rel = _normalize_relation(bd, raw, None)
                _verify_relation(rel, restricted)
                syz_here.append(rel)

        prod_rank = sum(1 for p in pivots if p < n_prods)
        base_cols = [mat.column(j) for j in range(n_prods)]
        inv_cols = {n: mat.column(n_prods + i) for i, n in enumerate(invs)}
        kept = _select_kept(effective, pinned, invs, inv_cols, base_cols,
                            prod_rank, nrows)

        check_cols = base_cols + [inv_cols[n] for n in kept]
        if rank_of_columns(check_cols, nrows) != prod_rank + len(kept):
            raise PolicyConflictError(
                f"keep set {kept} at bi-degree {bd} contains a redundant invariant")
        if prod_rank + len(kept) != rank:
            raise PolicyConflictError(
                f"keep set {kept} at bi-degree {bd} does not span the "
                f"restricted invariants there")

        eliminated = tuple(n for n in invs if n not in kept)
        solve_labels = labels[:n_prods] + [(n,) for n in kept]
        for name in eliminated:
            x = solve_columns(check_cols, inv_cols[name])
            if x is None:
                raise PolicyConflictError(
                    f"{name} at bi-degree {bd} is outside the span of the keep set")
            raw = [((name,), Fraction(1))]
            raw += [(solve_labels[j], -x[j]) for j in range(len(x)) if x[j]]
            rel = _normalize_relation(bd, raw, name)
            _verify_relation(rel, restricted)
            relations.append(rel)

        generators.extend(kept)
        syzygies.extend(syz_here)
        reports.append(BidegreeReport(bd, n_prods, len(invs), rank,
                                      len(kernel), kept, eliminated,
                                      len(syz_here)))

    return ReductionResult(
        basis=rb,
        policy=policy,
        effective_policy=effective,
        bounds=tuple(bounds),
        generators=_catalog_order(generators),
        relations=tuple(relations),
        syzygies=tuple(syzygies),
        vanished=rb.vanished,
        reports=tuple(reports),
    )


def solve_relations(result: ReductionResult) -> list[str]:
    """The solved-form display of every relation, in engine order."""
    return [rel.solved_str() for rel in result.relations]


@dataclass(frozen=True)
class UnionReport:
    theta_included: bool
    gamma_included: bool
    union: tuple[str, ...]
    cardinal: int

    @property
    def ok(self) -> bool:
        return self.theta_included and self.gamma_included


def check_union_property(results: Mapping[str, ReductionResult]) -> UnionReport:
    """Inclusion of the theta and gamma survivor sets in the alpha_prime set,
    and the cardinality of the three-way union."""
    try:
        g_t = set(results["theta"].generators)
        g_a = set(results["alpha_prime"].generators)
        g_g = set(results["gamma"].generators)
    except KeyError as exc:
        raise ValueError(f"missing reduction result for fiber {exc}") from exc
    union = _catalog_order(g_t | g_a | g_g)
    return UnionReport(g_t <= g_a, g_g <= g_a, union, len(union))
