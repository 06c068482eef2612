"""mebasis: exact evaluation of the cubic magneto-elastic integrity basis,
restriction to in-plane load subspaces, and reduction to minimal generating
sets with solved linear relations.

All arithmetic is exact (arbitrary-precision rationals). No floating point
enters any computation or any reported result.
"""

from __future__ import annotations

__version__ = "0.1.0"
