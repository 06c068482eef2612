"""Independent verification oracles.

Three checks that deliberately avoid the reduction engine's own code paths:

  verify_published      exact symbolic substitution of relation lists
                        shipped as data (data/published_relations.json),
  verify_generating_set spanning and minimality certificates for a
                        candidate survivor set, by direct linear algebra
                        over free monomials in the candidate names,
  numeric_spotcheck     seeded random rational points, with every invariant
                        value recomputed through the tensor recipes rather
                        than read off the restricted polynomials.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .catalog import CATALOG, CATALOG_NAMES
from .poly import MAG, Polynomial, VarTable, coefficient_matrix, parse_polynomial
from .ratlinalg import solve_columns
from .reduction import DEFAULT_BOUNDS, Relation, enumerate_products
from .restriction import RestrictedBasis, Substitution
from . import catalog as catalog_mod

DATA_PATH = Path(__file__).with_name("data") / "published_relations.json"

# Invariant names double as variables when parsing relation right-hand
# sides; the kind tag is irrelevant there.
NAME_TABLE = VarTable((n, MAG) for n in CATALOG_NAMES)


@dataclass(frozen=True)
class PublishedRelation:
    fiber: str
    lhs: str
    rhs: str
    source: str


def load_published(fiber: str | None = None,
                   path: str | Path | None = None) -> tuple[PublishedRelation, ...]:
    """The relation lists shipped with the package, optionally one fiber's."""
    data = json.loads(Path(path or DATA_PATH).read_text())
    rels = tuple(PublishedRelation(r["fiber"], r["lhs"], r["rhs"], r["source"])
                 for r in data["relations"])
    if fiber is not None:
        rels = tuple(r for r in rels if r.fiber == fiber)
        if not rels:
            raise ValueError(f"no relation list for fiber {fiber!r}")
    return rels


def _name_values(rb: RestrictedBasis) -> dict[str, Polynomial]:
    zero = Polynomial.zero(rb.substitution.table)
    values = {name: zero for name in CATALOG_NAMES}
    values.update(rb.as_dict())
    return values


def expand_names(p: Polynomial, values: Mapping[str, Polynomial]) -> Polynomial:
    """Substitute a polynomial for every invariant name in p.

    p lives on NAME_TABLE; the result lives on the table of the values.
    """
    table = next(iter(values.values())).table
    total = Polynomial.zero(table)
    for mono, coeff in p.terms.items():
        prod = Polynomial.constant(table, coeff)
        for name, e in zip(p.table.names, mono):
            if e:
                prod = prod * values[name] ** e
        total = total + prod
    return total


@dataclass(frozen=True)
class VerifyOutcome:
    relation: PublishedRelation
    ok: bool
    residual: Polynomial | None

    def residual_str(self) -> str:
        return "0" if self.ok else str(self.residual)


def verify_published(rel: PublishedRelation, rb: RestrictedBasis) -> VerifyOutcome:
    """Exact check that restricted(lhs) - rhs(restricted values) is zero."""
    if rel.lhs not in CATALOG_NAMES:
        raise ValueError(f"unknown invariant name {rel.lhs!r}")
    rhs = parse_polynomial(rel.rhs, NAME_TABLE)
    values = _name_values(rb)
    residual = values[rel.lhs] - expand_names(rhs, values)
    ok = residual.is_zero()
    return VerifyOutcome(rel, ok, None if ok else residual)


def numeric_invariants(sub: Substitution,
                       point: Mapping[str, Fraction]) -> dict[str, Fraction]:
    """All 30 invariant values at one rational point, recomputed through the
    tensor recipes on constant matrices."""
    table = sub.table
    csigma = [[Polynomial.constant(table, sub.sigma[i][j].evaluate(point))
               for j in range(3)] for i in range(3)]
    cm = [Polynomial.constant(table, sub.m[i].evaluate(point)) for i in range(3)]
    from .tensor3 import PolyMat3, PolyVec3
    values = catalog_mod.evaluate_all(CATALOG, PolyMat3(csigma), PolyVec3(cm))
    return {name: p.constant_value() for name, p in values.items()}


@dataclass(frozen=True)
class SpotcheckOutcome:
    ok: bool
    trials: int
    seed: int
    failed_trial: int | None = None


def random_point(table: VarTable, rng: random.Random) -> dict[str, Fraction]:
    """Rational point with numerators in [-100, 100], denominators in [1, 100]."""
    return {name: Fraction(rng.randint(-100, 100), rng.randint(1, 100))
            for name in table.names}


def numeric_spotcheck(rel: PublishedRelation | Relation, rb: RestrictedBasis,
                      trials: int = 100, seed: int = 0) -> SpotcheckOutcome:
    """Evaluate the relation residual at seeded random rational points.

    Exact rational evaluation; a pass means the residual was identically
    zero at every sampled point.
    """
    rng = random.Random(seed)
    rhs = None
    if isinstance(rel, PublishedRelation):
        rhs = parse_polynomial(rel.rhs, NAME_TABLE)
    for t in range(trials):
        point = random_point(rb.substitution.table, rng)
        values = numeric_invariants(rb.substitution, point)
        if rhs is not None:
            residual = values[rel.lhs] - rhs.evaluate(values)
        else:
            residual = rel.evaluate(values)
        if residual != 0:
            return SpotcheckOutcome(False, trials, seed, t)
    return SpotcheckOutcome(True, trials, seed)


def spotcheck_relations(rels: Sequence[PublishedRelation | Relation],
                        rb: RestrictedBasis,
                        trials: int = 100, seed: int = 0) -> list[SpotcheckOutcome]:
    """Spot-check several relations over one shared stream of points.

    Gives the same outcome per relation as numeric_spotcheck with the
    same trials and seed, but computes each point's invariant values
    once instead of once per relation.
    """
    rhs: list[Polynomial | None] = [
        parse_polynomial(r.rhs, NAME_TABLE) if isinstance(r, PublishedRelation)
        else None
        for r in rels]
    rng = random.Random(seed)
    failed_at: dict[int, int] = {}
    for t in range(trials):
        if len(failed_at) == len(rels):
            break
        point = random_point(rb.substitution.table, rng)
        values = numeric_invariants(rb.substitution, point)
        for i, rel in enumerate(rels):
            if i in failed_at:
                continue
            if rhs[i] is not None:
                residual = values[rel.lhs] - rhs[i].evaluate(values)
            else:
                residual = rel.evaluate(values)
            if residual != 0:
                failed_at[i] = t
    return [SpotcheckOutcome(i not in failed_at, trials, seed, failed_at.get(i))
            for i in range(len(rels))]


@dataclass(frozen=True)
class GeneratingSetReport:
    names: tuple[str, ...]
    spanning_ok: bool
    spanning_failures: tuple[str, ...]
    minimal: bool
    redundant: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.spanning_ok and self.minimal


def _in_span(target: Polynomial,
             columns: Sequence[Polynomial]) -> bool:
    if not columns:
        return False
    _, mat = coefficient_matrix(list(columns) + [target])
    cols = [mat.column(j) for j in range(len(columns))]
    return solve_columns(cols, mat.column(len(columns))) is not None


def verify_generating_set(names: Sequence[str], rb: RestrictedBasis,
                          bounds: tuple[int, int] = DEFAULT_BOUNDS) -> GeneratingSetReport:
    """Spanning and minimality certificates for a candidate survivor set.

    Spanning: every surviving invariant outside the set must lie in the
    span of free monomials in the set's names at its own bi-degree.
    Minimality: no member may lie in the span of free monomials in the
    other members at its bi-degree (dropping it would break spanning).
    Survivors whose bi-degree exceeds bounds are left unchecked; the
    defaults cover the whole catalog.
    """
    dmax, amax = bounds
    surviving = dict(rb.entries)
    for n in names:
        if n not in surviving:
            raise ValueError(f"{n!r} is not a surviving invariant of this basis")
    info = [(n, surviving[n], surviving[n].bidegree()) for n in names]

    spanning_failures = []
    for name, p in rb.entries:
        if name in names:
            continue
        alpha, beta = p.bidegree()
        if alpha + beta > dmax or alpha > amax:
            continue
        cols = [poly for _, poly in enumerate_products(info, p.bidegree(),
                                                       min_factors=1)]
        if not _in_span(p, cols):
            spanning_failures.append(name)

    redundant = []
    for g in names:
        others = [item for item in info if item[0] != g]
        p = surviving[g]
        cols = [poly for _, poly in enumerate_products(others, p.bidegree(),
                                                       min_factors=1)]
        if _in_span(p, cols):
            redundant.append(g)

    return GeneratingSetReport(tuple(names), not spanning_failures,
                               tuple(spanning_failures), not redundant,
                               tuple(redundant))
