"""Orbit methods for Wick rotations of pointwise curvature data."""
from .classify import PurityReport, WickVerdict, classify_purity, wick_check, wick_split
from .curvature import (
    CurvatureBundle,
    MetricPoint,
    anti_isometry,
    catalog_metric,
    constant_curvature_block,
    derived_curvature,
    direct_sum_metric,
)
from .document import parse_input
from .holomorphic import Signature, build_compatible_triple, is_real_slice, make_conjugation
from .invariants import evaluate_invariants, generate_contractions, invariant_distance, is_vsi
from .kempf_ness import (
    FlowConfig,
    FlowResult,
    Group,
    is_minimal,
    norm_flow,
    orbit_closed,
    orbit_limit,
    orbits_intersect,
)
from .tensors import Tensor, TensorShape, act_algebra, act_group

__version__ = "0.1.0"

__all__ = [
    "CurvatureBundle",
    "FlowConfig",
    "FlowResult",
    "Group",
    "MetricPoint",
    "PurityReport",
    "Signature",
    "Tensor",
    "TensorShape",
    "WickVerdict",
    "act_algebra",
    "act_group",
    "anti_isometry",
    "build_compatible_triple",
    "catalog_metric",
    "classify_purity",
    "constant_curvature_block",
    "derived_curvature",
    "direct_sum_metric",
    "evaluate_invariants",
    "generate_contractions",
    "invariant_distance",
    "is_minimal",
    "is_real_slice",
    "is_vsi",
    "make_conjugation",
    "norm_flow",
    "orbit_closed",
    "orbit_limit",
    "orbits_intersect",
    "parse_input",
    "wick_check",
    "wick_split",
]
