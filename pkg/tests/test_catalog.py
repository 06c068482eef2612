"""The 30-invariant catalog: order, bi-degrees, recipes, cubic symmetry."""

import random
from fractions import Fraction

import pytest

from mebasis.catalog import (BY_NAME, CATALOG, CATALOG_INDEX, CATALOG_NAMES,
                             evaluate_all, evaluate_invariant)
from mebasis.poly import Polynomial, VarTable
from mebasis.restriction import fiber_substitution, generic_substitution
from mebasis.tensor3 import PolyMat3, PolyVec3

F = Fraction

EXPECTED_ORDER = (
    "I010", "I002", "I020", "I003", "I012", "I030", "I004", "I022", "I014",
    "I200", "I201", "I210", "I202a", "I202b", "I211", "I220", "I203",
    "I212a", "I212b", "I221", "I204", "I213", "I222", "I400", "I401",
    "I410", "I402", "I411", "I600", "I601",
)

THETA_ZEROS = ("I003", "I004", "I014", "I202b", "I203", "I212b", "I204",
               "I222", "I401", "I402", "I411", "I600")

# Quarter turns about the three cube axes; together they generate the
# rotational symmetry group of the cube, so invariance under these three
# maps implies invariance under the whole group.
QUARTER_TURNS = (
    ((1, 0, 0), (0, 0, -1), (0, 1, 0)),
    ((0, 0, 1), (0, 1, 0), (-1, 0, 0)),
    ((0, -1, 0), (1, 0, 0), (0, 0, 1)),
)


def test_catalog_has_thirty_entries_in_fixed_order():
    assert len(CATALOG) == 30
    assert CATALOG_NAMES == EXPECTED_ORDER
    assert len(set(CATALOG_NAMES)) == 30
    assert all(CATALOG_INDEX[n] == i for i, n in enumerate(CATALOG_NAMES))
    assert all(BY_NAME[n].name == n for n in CATALOG_NAMES)


def test_declared_bidegrees_follow_the_digit_convention():
    # The three digits of a name count magnetization degree, diagonal
    # stress degree and off-diagonal stress degree; the bi-degree is
    # therefore (first digit, second + third).
    for defn in CATALOG:
        a, b, c = (int(d) for d in defn.name[1:4])
        assert defn.bidegree == (a, b + c), defn.name


def test_generic_trace_and_magnetization_square():
    sub = generic_substitution()
    values = evaluate_all(CATALOG, sub.sigma, sub.m)
    t = sub.table
    v = lambda n: Polynomial.variable(t, n)
    assert values["I010"] == v("s11") + v("s22") + v("s33")
    assert values["I200"] == v("m1") ** 2 + v("m2") ** 2 + v("m3") ** 2


def test_generic_off_diagonal_square():
    sub = generic_substitution()
    values = evaluate_all(CATALOG, sub.sigma, sub.m)
    t = sub.table
    v = lambda n: Polynomial.variable(t, n)
    assert values["I002"] == \
        2 * (v("s12") ** 2 + v("s13") ** 2 + v("s23") ** 2)


def test_no_generic_invariant_vanishes():
    sub = generic_substitution()
    values = evaluate_all(CATALOG, sub.sigma, sub.m)
    assert [n for n, p in values.items() if p.is_zero()] == []


def test_generic_invariants_are_bihomogeneous_with_declared_bidegree():
    sub = generic_substitution()
    values = evaluate_all(CATALOG, sub.sigma, sub.m)
    for defn in CATALOG:
        p = values[defn.name]
        assert p.is_bihomogeneous(), defn.name
        assert p.bidegree() == defn.bidegree, defn.name


def test_theta_restriction_kills_exactly_twelve():
    sub = fiber_substitution("theta")
    values = evaluate_all(CATALOG, sub.sigma, sub.m)
    zeros = tuple(n for n, p in values.items() if p.is_zero())
    assert zeros == THETA_ZEROS


def test_theta_kills_cubic_off_diagonal_trace():
    sub = fiber_substitution("theta")
    assert evaluate_invariant(BY_NAME["I003"], sub.sigma, sub.m).is_zero()


@pytest.mark.parametrize("fiber", ["alpha_prime", "gamma"])
def test_other_fibers_kill_nothing(fiber):
    sub = fiber_substitution(fiber)
    values = evaluate_all(CATALOG, sub.sigma, sub.m)
    assert [n for n, p in values.items() if p.is_zero()] == []


def test_evaluate_invariant_agrees_with_evaluate_all():
    sub = fiber_substitution("theta")
    values = evaluate_all(CATALOG, sub.sigma, sub.m)
    for defn in CATALOG:
        assert evaluate_invariant(defn, sub.sigma, sub.m) == values[defn.name]


def test_recipes_reject_non_symmetric_stress():
    table = VarTable([])
    c = lambda x: Polynomial.constant(table, F(x))
    skew = PolyMat3([[c(0), c(1), c(0)], [c(0), c(0), c(0)],
                     [c(0), c(0), c(0)]])
    m = PolyVec3([c(1), c(0), c(0)])
    with pytest.raises(ValueError):
        evaluate_invariant(BY_NAME["I010"], skew, m)


# -- cubic symmetry ------------------------------------------------------

def _constant_values(sigma_rows, m_entries):
    table = VarTable([])
    c = lambda x: Polynomial.constant(table, F(x))
    sigma = PolyMat3([[c(x) for x in row] for row in sigma_rows])
    m = PolyVec3([c(x) for x in m_entries])
    values = evaluate_all(CATALOG, sigma, m)
    return {n: p.constant_value() for n, p in values.items()}


def _rotate(r, sigma_rows, m_entries):
    rs = [[sum(F(r[i][k]) * sigma_rows[k][l] * F(r[j][l])
               for k in range(3) for l in range(3))
           for j in range(3)] for i in range(3)]
    rm = [sum(F(r[i][k]) * m_entries[k] for k in range(3)) for i in range(3)]
    return rs, rm


def test_all_invariants_survive_quarter_turns_at_random_points():
    rng = random.Random(20230817)
    for _ in range(5):
        sigma = [[F(rng.randint(-30, 30), rng.randint(1, 10))
                  for _ in range(3)] for _ in range(3)]
        sigma = [[(sigma[i][j] + sigma[j][i]) / 2 for j in range(3)]
                 for i in range(3)]
        m = [F(rng.randint(-30, 30), rng.randint(1, 10)) for _ in range(3)]
        base = _constant_values(sigma, m)
        for r in QUARTER_TURNS:
            rs, rm = _rotate(r, sigma, m)
            assert _constant_values(rs, rm) == base


def test_quarter_turns_are_proper_rotations():
    for r in QUARTER_TURNS:
        det = (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
               - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
               + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]))
        assert det == 1
        rt_r = [[sum(r[k][i] * r[k][j] for k in range(3)) for j in range(3)]
                for i in range(3)]
        assert rt_r == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
