"""Exact patch calculus: boundaried-graph algebra, patchworks, path and
tree decompositions, wall geometry, extremal enumeration, and topological
density constructions, all in exact rational arithmetic."""

__version__ = "0.1.0"

from .graphs import Graph
from .patches import Patch, identity_patch, patch_power, patch_product

__all__ = [
    "Graph",
    "Patch",
    "identity_patch",
    "patch_product",
    "patch_power",
    "__version__",
]
