"""Glass-cut self-affine dissections of convex quadrangles.

Decide whether an affine class of convex quadrangles can be cut by straight
full-width cuts into n affine copies of itself, construct explicit
dissections, and verify them exactly.
"""

from .affine_types import (
    AffineClass,
    Classification,
    GenericQuad,
    Parallelogram,
    Trapezoid,
    affine_quotient,
    canonicalize,
    class_close,
    classify_quadrangle,
    flip,
    flip_factor,
    is_affine_kite,
)
from .composition import ClassSet, ClassTerm, Interval, Op, QCurve, combine, compose_sets, member
from .errors import (
    AmbiguousGeometryError,
    GcError,
    GlueingError,
    InvalidQuadrangleError,
    PlanFormatError,
    SearchCapError,
    UnrealizableError,
)
from .families import FamilyId, family_beta, family_membership, family_residual
from .realizer import (
    Construction,
    CutRecord,
    DissectionPlan,
    LabeledQuad,
    dissect_even_general,
    dissect_odd,
    dissect_por5,
    dissect_trapezoid,
    dissect_trapezoid_selfaffine,
    realize_cut,
    realize_tree,
    standard_placement,
)
from .treesearch import (
    LEAF,
    ExtTree,
    Leaf,
    Node,
    SearchHit,
    count_trees,
    enumerate_trees,
    evaluate,
    quotient_exponents,
    search_self_affine,
)
from .verifier import (
    TileCheck,
    VerificationReport,
    convex_intersection_area,
    polygon_area,
    verify_plan,
)

__version__ = "0.1.0"

__all__ = [
    "AffineClass",
    "AmbiguousGeometryError",
    "Classification",
    "ClassSet",
    "ClassTerm",
    "Construction",
    "CutRecord",
    "DissectionPlan",
    "ExtTree",
    "FamilyId",
    "GcError",
    "GenericQuad",
    "GlueingError",
    "Interval",
    "InvalidQuadrangleError",
    "LEAF",
    "LabeledQuad",
    "Leaf",
    "Node",
    "Op",
    "Parallelogram",
    "PlanFormatError",
    "QCurve",
    "SearchCapError",
    "SearchHit",
    "TileCheck",
    "Trapezoid",
    "UnrealizableError",
    "VerificationReport",
    "affine_quotient",
    "canonicalize",
    "class_close",
    "classify_quadrangle",
    "combine",
    "compose_sets",
    "convex_intersection_area",
    "count_trees",
    "dissect_even_general",
    "dissect_odd",
    "dissect_por5",
    "dissect_trapezoid",
    "dissect_trapezoid_selfaffine",
    "enumerate_trees",
    "evaluate",
    "family_beta",
    "family_membership",
    "family_residual",
    "flip",
    "flip_factor",
    "is_affine_kite",
    "member",
    "polygon_area",
    "quotient_exponents",
    "realize_cut",
    "realize_tree",
    "search_self_affine",
    "standard_placement",
    "verify_plan",
]
