"""Numerical engine: compiled systems, path tracking, and certification."""

from .polysystem import Group, PolySystem, Term
from .track import (Homotopy, Solution, TrackOptions, cluster_distinct,
                    newton_polish, param_homotopy, refine, track)
from .start import ProductSpec, linear_product_start, total_degree_start
from .certify import certify, count_certified_distinct, krawczyk_test

__all__ = [
    "Group", "PolySystem", "Term", "Homotopy", "Solution", "TrackOptions",
    "cluster_distinct", "newton_polish", "param_homotopy", "refine", "track",
    "ProductSpec", "linear_product_start", "total_degree_start",
    "certify", "count_certified_distinct", "krawczyk_test",
]
