"""The 30 fundamental cubic invariants of a symmetric stress tensor and a
magnetization vector, as executable tensor recipes.

Shorthand used in the formula strings (s is the stress tensor, m the
magnetization vector):

  sb = dbar(s)            off-diagonal part of s
  sd = ddev(s)            diagonal part of the deviator of s
  mb = dbar(m o m)        off-diagonal part of the dyadic m o m
  md = ddev(m o m)        diagonal deviator part of m o m
  bar(x), dev(x)          the same projectors applied to x

Catalog order is fixed and load-bearing: selection policies and every
reported name list follow it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .poly import Polynomial
from .tensor3 import PolyMat3, PolyVec3, dbar, ddev, outer


class TensorParts:
    """Shared building blocks for evaluating the catalog on one (sigma, m)."""

    def __init__(self, sigma: PolyMat3, m: PolyVec3):
        if sigma.table != m.table:
            raise ValueError("sigma and m built on different variable tables")
        if not sigma.is_symmetric():
            raise ValueError("stress tensor must be symmetric")
        self.sigma = sigma
        self.m = m
        self.tr = sigma.trace()
        self.sd = ddev(sigma)
        self.sb = dbar(sigma)
        self.sb2 = self.sb @ self.sb
        self.sb2_bar = dbar(self.sb2)
        self.sb2_dev = ddev(self.sb2)
        mm = outer(m)
        self.mb = dbar(mm)
        self.md = ddev(mm)


def _tr(*mats: PolyMat3) -> Polynomial:
    prod = mats[0]
    for x in mats[1:]:
        prod = prod @ x
    return prod.trace()


@dataclass(frozen=True)
class InvariantDef:
    name: str
    label: str
    formula: str
    bidegree: tuple[int, int]
    recipe: Callable[[TensorParts], Polynomial]


def build_catalog() -> tuple[InvariantDef, ...]:
    def d(name, label, formula, bidegree, recipe):
        return InvariantDef(name, label, formula, bidegree, recipe)

    return (
        d("I010", "I_{010}", "tr(s)", (0, 1), lambda p: p.tr),
        d("I002", "I_{002}", "tr(sb^2)", (0, 2), lambda p: _tr(p.sb, p.sb)),
        d("I020", "I_{020}", "tr(sd^2)", (0, 2), lambda p: _tr(p.sd, p.sd)),
        d("I003", "I_{003}", "tr(sb^3)", (0, 3), lambda p: _tr(p.sb, p.sb, p.sb)),
        d("I012", "I_{012}", "tr(sb^2*sd)", (0, 3), lambda p: _tr(p.sb, p.sb, p.sd)),
        d("I030", "I_{030}", "tr(sd^3)", (0, 3), lambda p: _tr(p.sd, p.sd, p.sd)),
        d("I004", "I_{004}", "tr(bar(sb^2)^2)", (0, 4),
          lambda p: _tr(p.sb2_bar, p.sb2_bar)),
        d("I022", "I_{022}", "tr(sb*sd*sb*sd)", (0, 4),
          lambda p: _tr(p.sb, p.sd, p.sb, p.sd)),
        d("I014", "I_{014}", "tr(sb*bar(sb^2)*sb*sd)", (0, 5),
          lambda p: _tr(p.sb, p.sb2_bar, p.sb, p.sd)),
        d("I200", "I_{200}", "dot(m,m)", (2, 0), lambda p: p.m.dot(p.m)),
        d("I201", "I_{201}", "tr(mb*sb)", (2, 1), lambda p: _tr(p.mb, p.sb)),
        d("I210", "I_{210}", "tr(md*sd)", (2, 1), lambda p: _tr(p.md, p.sd)),
        d("I202a", "I_{202}^{a}", "tr(md*sb^2)", (2, 2), lambda p: _tr(p.md, p.sb2)),
        d("I202b", "I_{202}^{b}", "tr(mb*bar(sb^2))", (2, 2),
          lambda p: _tr(p.mb, p.sb2_bar)),
        d("I211", "I_{211}", "tr(mb*sb*sd)", (2, 2), lambda p: _tr(p.mb, p.sb, p.sd)),
        d("I220", "I_{220}", "tr(md*sd^2)", (2, 2), lambda p: _tr(p.md, p.sd, p.sd)),
        d("I203", "I_{203}", "tr(mb*bar(sb^2)*sb)", (2, 3),
          lambda p: _tr(p.mb, p.sb2_bar, p.sb)),
        d("I212a", "I_{212}^{a}", "tr(md*dev(sb^2)*sd)", (2, 3),
          lambda p: _tr(p.md, p.sb2_dev, p.sd)),
        d("I212b", "I_{212}^{b}", "tr(mb*bar(sb^2)*sd)", (2, 3),
          lambda p: _tr(p.mb, p.sb2_bar, p.sd)),
        d("I221", "I_{221}", "tr(mb*sd*sb*sd)", (2, 3),
          lambda p: _tr(p.mb, p.sd, p.sb, p.sd)),
        d("I204", "I_{204}", "tr(md*sb*bar(sb^2)*sb)", (2, 4),
          lambda p: _tr(p.md, p.sb, p.sb2_bar, p.sb)),
        d("I213", "I_{213}", "tr(mb*dev(sb^2)*sb*sd)", (2, 4),
          lambda p: _tr(p.mb, p.sb2_dev, p.sb, p.sd)),
        d("I222", "I_{222}", "tr(mb*sd*bar(sb^2)*sd)", (2, 4),
          lambda p: _tr(p.mb, p.sd, p.sb2_bar, p.sd)),
        d("I400", "I_{400}", "tr(mb^2)", (4, 0), lambda p: _tr(p.mb, p.mb)),
        d("I401", "I_{401}", "tr(mb*sb*mb)", (4, 1), lambda p: _tr(p.mb, p.sb, p.mb)),
        d("I410", "I_{410}", "tr(mb*sd*mb)", (4, 1), lambda p: _tr(p.mb, p.sd, p.mb)),
        d("I402", "I_{402}", "tr(mb*bar(sb^2)*mb)", (4, 2),
          lambda p: _tr(p.mb, p.sb2_bar, p.mb)),
        d("I411", "I_{411}", "tr(mb*sd*sb*mb)", (4, 2),
          lambda p: _tr(p.mb, p.sd, p.sb, p.mb)),
        d("I600", "I_{600}", "tr(mb^3)", (6, 0), lambda p: _tr(p.mb, p.mb, p.mb)),
        d("I601", "I_{601}", "tr(md*mb*md*sb)", (6, 1),
          lambda p: _tr(p.md, p.mb, p.md, p.sb)),
    )


CATALOG: tuple[InvariantDef, ...] = build_catalog()
CATALOG_NAMES: tuple[str, ...] = tuple(defn.name for defn in CATALOG)
BY_NAME: Mapping[str, InvariantDef] = {defn.name: defn for defn in CATALOG}
CATALOG_INDEX: Mapping[str, int] = {name: i for i, name in enumerate(CATALOG_NAMES)}


def evaluate_invariant(defn: InvariantDef, sigma: PolyMat3, m: PolyVec3) -> Polynomial:
    return defn.recipe(TensorParts(sigma, m))


def evaluate_all(catalog: Sequence[InvariantDef], sigma: PolyMat3,
                 m: PolyVec3) -> dict[str, Polynomial]:
    """Evaluate every catalog entry on one (sigma, m), sharing the parts.

    The result preserves catalog order.
    """
    parts = TensorParts(sigma, m)
    return {defn.name: defn.recipe(parts) for defn in catalog}
