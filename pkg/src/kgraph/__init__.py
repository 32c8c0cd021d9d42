"""Finite higher-rank graphs: validation, path algebra, boundary fragments,
source removal, and the graph-theoretic checks behind simplicity and
ideal-structure statements."""

__version__ = "0.1.0"

from .degrees import Degree, ExtDegree
from .core import EdgeDecl, KGraph, Path, SkeletonSpec, SquareDecl, is_locally_convex, validate
from .boundary import BoundaryFragment, fragments_from
from .desource import MTilde, Region, VTilde, materialize
from .analysis import Status, Verdict, find_lp, has_lp_at, is_cofinal, simplicity_verdict
from .ideals import enumerate_sat_hered, quotient, saturate_hereditary

__all__ = [
    "__version__",
    "Degree",
    "ExtDegree",
    "EdgeDecl",
    "KGraph",
    "Path",
    "SkeletonSpec",
    "SquareDecl",
    "is_locally_convex",
    "validate",
    "BoundaryFragment",
    "fragments_from",
    "MTilde",
    "Region",
    "VTilde",
    "materialize",
    "Status",
    "Verdict",
    "find_lp",
    "has_lp_at",
    "is_cofinal",
    "simplicity_verdict",
    "enumerate_sat_hered",
    "quotient",
    "saturate_hereditary",
]
