"""Sup-norm interpolation errors, reduction factors and table reproduction.

Errors are measured against the source rescaled onto the circle: with the
``N`` samples sitting on ``[0, L]``, ``L = (N - 1) h``, the reference is
``f(t * 2 pi / L)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

from . import _io
from .grid import TWO_PI, SampleSet, SourceFunction, place_on_circle, sample_source
from .phantom import DerivativeSource, PhantomConfig, fill_phantom
from .spline import DEFAULT_TAIL_TOLERANCE, TrigSpline, build_spline

Normalization = Literal["sup", "range"]
DEFAULT_DENSE = 2001
MATCH_ORDERS = (0, 1, 2)


def reference_on_circle(f: SourceFunction, original_count: int, step: float, t):
    """Source value at circle position ``t`` under the data-arc rescaling."""
    scale = TWO_PI / ((original_count - 1) * step)
    return np.asarray(f(np.asarray(t, dtype=float) * scale), dtype=float)


@dataclass(frozen=True)
class ErrorMeasure:
    error: float
    absolute: bool  # True when the reference vanishes and no normalisation was possible
    t_max: float  # where the largest deviation occurs


def measure_error(
    spline: TrigSpline,
    f: SourceFunction,
    original_count: int,
    dense: int = DEFAULT_DENSE,
    *,
    arc: Literal["data", "full"] = "data",
    normalize: Normalization = "sup",
) -> ErrorMeasure:
    if dense < 101:
        raise ValueError(f"dense must be >= 101, got {dense}")
    if normalize not in ("sup", "range"):
        raise ValueError(f"normalize must be 'sup' or 'range', got {normalize!r}")
    h = spline.grid.step
    end = (original_count - 1) * h if arc == "data" else TWO_PI
    t = np.linspace(0.0, end, dense)
    ref = reference_on_circle(f, original_count, h, t)
    dev = np.abs(spline(t) - ref)
    i = int(np.argmax(dev))
    worst = float(dev[i])
    denom = float(np.max(np.abs(ref))) if normalize == "sup" else float(np.ptp(ref))
    if denom == 0.0:
        return ErrorMeasure(worst, True, float(t[i]))
    return ErrorMeasure(worst / denom, False, float(t[i]))


def relative_error(
    spline: TrigSpline,
    f: SourceFunction,
    original_count: int,
    dense: int = DEFAULT_DENSE,
    *,
    arc: Literal["data", "full"] = "data",
    normalize: Normalization = "sup",
) -> float:
    """``max |S - f~| / max |f~|`` on ``dense`` equispaced points of the data arc.

    ``normalize="range"`` divides by ``max f~ - min f~`` instead.
    """
    return measure_error(spline, f, original_count, dense, arc=arc, normalize=normalize).error


def build_variant(
    f: SourceFunction,
    n: int,
    k: int,
    p: int = 0,
    r: int = 3,
    source: DerivativeSource = "divided_difference",
    *,
    explicit_values: Sequence[float] | None = None,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
) -> tuple[SampleSet, TrigSpline]:
    """Sample ``f`` at ``n`` points, add ``2k`` phantom nodes and build the spline."""
    samples = place_on_circle(sample_source(f, n), k)
    if k:
        if explicit_values is not None:
            config = PhantomConfig(k, p, "explicit_values", tuple(explicit_values))
        else:
            config = PhantomConfig(k, p, source)
        samples = fill_phantom(samples, config, f)
    return samples, build_spline(samples, r, tail_tolerance)


@dataclass(frozen=True)
class ErrorReport:
    """One table row: baseline (no phantom nodes) and phantom variants for a given k."""

    function_id: str
    N: int
    k: int
    r: int
    baseline_error: float
    baseline_full: float
    variant_errors: dict[int, float]
    absolute: bool = False
    normalize: str = "sup"
    derivative_source: str = "divided_difference"
    reduction_factors: dict[int, float] = field(init=False)

    def __post_init__(self):
        factors = {
            p: (self.baseline_error / e if e > 0 else float("inf"))
            for p, e in sorted(self.variant_errors.items())
        }
        object.__setattr__(self, "reduction_factors", factors)

    def to_json(self) -> dict:
        return {
            "function": self.function_id,
            "N": self.N,
            "k": self.k,
            "r": self.r,
            "baseline": self.baseline_error,
            "baseline_arc": self.baseline_error,
            "baseline_full": self.baseline_full,
            "variants": {f"p{p}": e for p, e in sorted(self.variant_errors.items())},
            "factors": {f"p{p}": v for p, v in sorted(self.reduction_factors.items())},
            "absolute": self.absolute,
            "normalization": self.normalize,
            "derivative_source": self.derivative_source,
        }


def run_table(
    f: SourceFunction,
    n: int,
    k_values: Iterable[int] = (1, 2),
    r: int = 3,
    *,
    match_orders: Iterable[int] = MATCH_ORDERS,
    source: DerivativeSource = "divided_difference",
    dense: int = DEFAULT_DENSE,
    normalize: Normalization = "sup",
) -> list[ErrorReport]:
    if n % 2 == 0:
        raise ValueError(f"N must be odd, got {n}")
    _, base = build_variant(f, n, 0, r=r)
    baseline = measure_error(base, f, n, dense, normalize=normalize)
    full = measure_error(base, f, n, dense, arc="full", normalize=normalize)
    reports = []
    for k in k_values:
        errors = {}
        absolute = baseline.absolute
        for p in match_orders:
            _, s = build_variant(f, n, k, p, r, source)
            m = measure_error(s, f, n, dense, normalize=normalize)
            errors[p] = m.error
            absolute = absolute or m.absolute
        reports.append(
            ErrorReport(f.id, n, k, r, baseline.error, full.error, errors, absolute, normalize, source)
        )
    return reports


_ORDER_LABELS = {0: "linear", 1: "first derivative", 2: "two derivatives"}


def render_markdown(reports: Sequence[ErrorReport], title: str | None = None) -> str:
    orders = sorted({p for rep in reports for p in rep.variant_errors})
    head = ["N", "baseline error", "phantom nodes"] + [f"factor ({_ORDER_LABELS.get(p, f'p={p}')})" for p in orders]
    lines = []
    if title:
        lines += [f"### {title}", ""]
    lines.append("| " + " | ".join(head) + " |")
    lines.append("|" + "|".join("---" for _ in head) + "|")
    for i, rep in enumerate(reports):
        base = format(rep.baseline_error, ".4g") if i == 0 else ""
        cells = [str(rep.N), base, str(2 * rep.k)]
        cells += [format(rep.reduction_factors[p], ".4g") for p in orders]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def render_csv(reports: Sequence[ErrorReport]) -> str:
    header = ["function", "N", "k", "r", "p", "baseline_arc", "baseline_full", "variant_error", "reduction_factor"]
    rows = []
    for rep in reports:
        for p in sorted(rep.variant_errors):
            rows.append([
                rep.function_id, rep.N, rep.k, rep.r, p,
                rep.baseline_error, rep.baseline_full,
                rep.variant_errors[p], rep.reduction_factors[p],
            ])
    return _io.csv_text(header, rows)


def emit_curve(spline: TrigSpline, f: SourceFunction, original_count: int, dense: int = DEFAULT_DENSE) -> np.ndarray:
    """Columns ``t, S(t), f~(t), |S - f~|`` over ``[0, 2 pi]``.

    Past the data arc ``f~`` continues the source beyond its interval.
    """
    t = np.linspace(0.0, TWO_PI, dense)
    s = spline(t)
    ref = reference_on_circle(f, original_count, spline.grid.step, t)
    return np.column_stack([t, s, ref, np.abs(s - ref)])


def curve_csv(curve: np.ndarray, comments: Sequence[str] = ()) -> str:
    return _io.csv_text(["t", "spline", "reference", "abs_error"], (list(map(float, row)) for row in curve), comments)


__all__ = [
    "ErrorMeasure",
    "ErrorReport",
    "build_variant",
    "curve_csv",
    "emit_curve",
    "measure_error",
    "reference_on_circle",
    "relative_error",
    "render_csv",
    "render_markdown",
    "run_table",
]
