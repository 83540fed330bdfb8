"""Trigonometric spline interpolation of non-periodic samples via phantom nodes."""

from .analysis import ErrorReport, build_variant, emit_curve, relative_error, run_table
from .grid import (
    CircleGrid,
    SampleSet,
    SourceFunction,
    get_source,
    make_grid,
    place_on_circle,
    sample_source,
)
from .optimize import SearchSpec, default_search, grid_search, optimize_phantom
from .phantom import HermiteBlend, PhantomConfig, boundary_derivatives, build_blend, fill_phantom
from .spline import FourierCoefficients, TrigSpline, alias_factor, build_spline, dft_odd

__version__ = "0.1.0"

__all__ = [
    "CircleGrid",
    "ErrorReport",
    "FourierCoefficients",
    "HermiteBlend",
    "PhantomConfig",
    "SampleSet",
    "SearchSpec",
    "SourceFunction",
    "TrigSpline",
    "alias_factor",
    "boundary_derivatives",
    "build_blend",
    "build_spline",
    "build_variant",
    "default_search",
    "dft_odd",
    "emit_curve",
    "fill_phantom",
    "get_source",
    "grid_search",
    "make_grid",
    "optimize_phantom",
    "place_on_circle",
    "relative_error",
    "run_table",
    "sample_source",
]
