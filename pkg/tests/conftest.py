"""Shared fixtures.

The three built-in restricted bases and their reductions are immutable
and moderately expensive to build, so they are computed once per session.
Tests must not mutate them.
"""

import pytest

from mebasis.catalog import CATALOG
from mebasis.reduction import reduce_basis
from mebasis.restriction import FIBERS, fiber_substitution, restrict_basis


@pytest.fixture(scope="session")
def bases():
    return {fiber: restrict_basis(CATALOG, fiber_substitution(fiber))
            for fiber in FIBERS}


@pytest.fixture(scope="session")
def reductions(bases):
    return {fiber: reduce_basis(rb) for fiber, rb in bases.items()}


@pytest.fixture(scope="session")
def theta_basis(bases):
    return bases["theta"]


@pytest.fixture(scope="session")
def alpha_prime_basis(bases):
    return bases["alpha_prime"]


@pytest.fixture(scope="session")
def gamma_basis(bases):
    return bases["gamma"]
