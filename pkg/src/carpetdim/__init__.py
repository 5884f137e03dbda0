"""Dimension theory of triangular Gatzouras-Lalley-type planar carpets."""

from .core import AffineMap2, Cylinder, TGLSystem, cylinder, load_system, skewness_bound, validate_system
from .dimension import (
    DimensionReport,
    affinity_dimension,
    box_dimension_upper,
    dimension_report,
    hausdorff_dimension_upper,
)
from .conditions import ConditionReport, condition_report

__all__ = [
    "AffineMap2",
    "ConditionReport",
    "Cylinder",
    "DimensionReport",
    "TGLSystem",
    "affinity_dimension",
    "box_dimension_upper",
    "condition_report",
    "cylinder",
    "dimension_report",
    "hausdorff_dimension_upper",
    "load_system",
    "skewness_bound",
    "validate_system",
]

__version__ = "0.1.0"
