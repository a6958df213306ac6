"""Generalized nef partitions, good pairs and Calabi-Yau complete intersections
in Q-Fano toric varieties, with exact rational arithmetic."""

__version__ = "0.1.0"

from .geometry import Polytope, convex_hull, minkowski_sum
from .goodpairs import (
    GoodPair,
    dual_good_pair,
    equations_from_pair,
    is_delsarte,
    is_good_pair,
    pair_from_equations,
    pair_matrix,
)
from .nef import (
    GeneralizedNefPartition,
    VertexPartition,
    all_gnps,
    check_gnp,
    dual_gnp,
    is_gnp,
    is_irreducible,
    make_gnp,
    parts_from_partition,
)
from .regularity import is_cy_family, is_quasismooth_ci, is_well_formed
from .toric import CoxSystem, ToricAmbient, ambient_from_polytope

__all__ = [
    "CoxSystem",
    "GeneralizedNefPartition",
    "GoodPair",
    "Polytope",
    "ToricAmbient",
    "VertexPartition",
    "all_gnps",
    "ambient_from_polytope",
    "check_gnp",
    "convex_hull",
    "dual_gnp",
    "dual_good_pair",
    "equations_from_pair",
    "is_cy_family",
    "is_delsarte",
    "is_gnp",
    "is_good_pair",
    "is_irreducible",
    "is_quasismooth_ci",
    "is_well_formed",
    "make_gnp",
    "minkowski_sum",
    "pair_from_equations",
    "pair_matrix",
    "parts_from_partition",
]
