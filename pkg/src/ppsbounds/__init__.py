"""Exact bound calculator and motion planners for sphere-product quotients.

The package computes, over GF(2) and exact integer arithmetic, topological
complexity and Lusternik-Schnirelmann category bounds, immersion obstructions,
and axial-map obstructions for quotients of sphere products by the diagonal
antipodal involution.  It also ships executable equivariant motion planners on
spheres together with a sampling verification harness.
"""

from ppsbounds.cohomology import SphereTuple, CapacityError, make_ring
from ppsbounds.interval import Interval

__version__ = "0.1.0"

__all__ = ["SphereTuple", "CapacityError", "Interval", "make_ring", "__version__"]
