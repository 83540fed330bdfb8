"""Phantom-node completion of a sample set.

The phantom arc runs from the last original node ``(N-1) h`` to ``2 pi``. A
two-point Hermite polynomial on that arc joins the end of the data (value and
derivatives) to the start of the data, so the periodic extension is smooth up
to the matched order. Its values at the phantom nodes complete the sample set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .grid import TWO_PI, SampleSet, SourceFunction

DerivativeSource = Literal["exact", "divided_difference", "explicit_values"]
DERIVATIVE_SOURCES = ("exact", "divided_difference", "explicit_values")
MAX_MATCH_ORDER = 2


def _forward_stencils(y: np.ndarray, h: float, p: int) -> list[float]:
    # second-order one-sided formulas, y[0] is the boundary node
    out: list[float] = []
    if p >= 1:
        out.append((-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h))
    if p >= 2:
        out.append((2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / (h * h))
    return out


def boundary_derivatives(
    original: Sequence[float],
    h: float,
    p: int,
    side: Literal["left", "right"],
    source: DerivativeSource = "divided_difference",
    f: SourceFunction | None = None,
) -> list[float]:
    """Estimate derivatives ``1..p`` of the data at one end, in the circle variable.

    ``left`` is the first node (t = 0), ``right`` the last original node.
    With ``source="exact"`` the derivative evaluators of ``f`` are used at
    x = 0 or x = 2 pi and rescaled by the chain rule from ``[0, 2 pi]`` onto
    the data arc ``[0, (N-1) h]``.
    """
    y = np.asarray(original, dtype=float)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if not 0 <= p <= MAX_MATCH_ORDER:
        raise ValueError(f"match order p must be in 0..{MAX_MATCH_ORDER}, got {p}")
    if h <= 0:
        raise ValueError(f"step h must be positive, got {h}")
    if p == 0:
        return []
    if source == "divided_difference":
        if y.size < p + 2:
            raise ValueError(f"need at least {p + 2} samples for order-{p} stencils, got {y.size}")
        if side == "left":
            return [float(v) for v in _forward_stencils(y, h, p)]
        # mirrored stencil: odd derivatives change sign
        d = _forward_stencils(y[::-1], h, p)
        return [float((-1) ** (q + 1) * v) for q, v in enumerate(d)]
    if source == "exact":
        if f is None:
            raise ValueError("exact derivatives need a source function")
        scale = TWO_PI / ((y.size - 1) * h)
        x = 0.0 if side == "left" else TWO_PI
        return [float(f.derivative(x, q)) * scale**q for q in range(1, p + 1)]
    raise ValueError(f"unknown derivative source {source!r}")


@dataclass(frozen=True)
class HermiteBlend:
    """Two-point Hermite polynomial on ``[left_end, right_end]``.

    ``poly_coeffs[i]`` multiplies ``s**i`` with ``s = t - left_end``.
    """

    left_end: float
    right_end: float
    match_order: int
    poly_coeffs: tuple[float, ...]

    def __call__(self, t):
        return self.derivative(t, 0)

    def derivative(self, t, q: int = 0):
        s = np.asarray(t, dtype=float) - self.left_end
        c = np.asarray(self.poly_coeffs)
        for _ in range(q):
            c = c[1:] * np.arange(1, c.size)
        if c.size == 0:
            return np.zeros_like(s)
        return np.polynomial.polynomial.polyval(s, c)


def build_blend(
    f_end_value: float,
    f_start_value: float,
    end_derivs: Sequence[float],
    start_derivs: Sequence[float],
    left_end: float,
    right_end: float,
) -> HermiteBlend:
    """Hermite polynomial matching the data end at ``left_end`` and the data start at ``right_end``.

    Built from confluent divided differences (Newton form on the doubled
    nodes) and expanded to monomials in ``s = t - left_end``.
    """
    end_derivs = [float(v) for v in end_derivs]
    start_derivs = [float(v) for v in start_derivs]
    if len(end_derivs) != len(start_derivs):
        raise ValueError(
            f"derivative lists differ in length ({len(end_derivs)} vs {len(start_derivs)})"
        )
    width = right_end - left_end
    if not width >= 1e-12:
        raise ValueError(f"degenerate phantom arc [{left_end}, {right_end}]")
    p = len(end_derivs)
    left = [float(f_end_value)] + end_derivs
    right = [float(f_start_value)] + start_derivs
    z = np.array([0.0] * (p + 1) + [width] * (p + 1))
    size = z.size

    # table[i] holds f[z_i, ..., z_{i+level}] for the current level
    table = np.array([left[0]] * (p + 1) + [right[0]] * (p + 1))
    newton = [table[0]]
    for level in range(1, size):
        nxt = np.empty(size - level)
        for i in range(size - level):
            if z[i + level] == z[i]:
                data = left if z[i] == 0.0 else right
                nxt[i] = data[level] / math.factorial(level)
            else:
                nxt[i] = (table[i + 1] - table[i]) / (z[i + level] - z[i])
        table = nxt
        newton.append(table[0])

    # Horner expansion of sum_i newton[i] * prod_{l<i} (s - z_l)
    coeffs = np.zeros(size)
    coeffs[0] = newton[-1]
    deg = 0
    for i in range(size - 2, -1, -1):
        shifted = np.zeros(size)
        shifted[1:deg + 2] = coeffs[:deg + 1]
        coeffs = shifted - z[i] * coeffs
        coeffs[0] += newton[i]
        deg += 1
    return HermiteBlend(float(left_end), float(right_end), p, tuple(float(c) for c in coeffs))


@dataclass(frozen=True)
class PhantomConfig:
    """How to fill the ``2 * pairs`` phantom slots.

    ``match_order`` 0, 1, 2 selects the linear, first-derivative and
    two-derivative phantom functions. ``explicit_values`` bypasses the
    Hermite construction entirely.
    """

    pairs: int = 1
    match_order: int = 0
    derivative_source: DerivativeSource = "divided_difference"
    explicit_values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.pairs < 1:
            raise ValueError(f"pairs must be >= 1, got {self.pairs}")
        if self.derivative_source not in DERIVATIVE_SOURCES:
            raise ValueError(
                f"derivative_source must be one of {DERIVATIVE_SOURCES}, got {self.derivative_source!r}"
            )
        if self.derivative_source == "explicit_values":
            if self.explicit_values is None or len(self.explicit_values) != 2 * self.pairs:
                got = 0 if self.explicit_values is None else len(self.explicit_values)
                raise ValueError(f"expected {2 * self.pairs} explicit phantom values, got {got}")
        elif not 0 <= self.match_order <= MAX_MATCH_ORDER:
            raise ValueError(f"match_order must be in 0..{MAX_MATCH_ORDER}, got {self.match_order}")


def phantom_blend(
    samples: SampleSet,
    match_order: int,
    derivative_source: DerivativeSource = "divided_difference",
    f: SourceFunction | None = None,
) -> HermiteBlend:
    """The phantom function for ``samples`` on the arc ``[(N-1) h, 2 pi]``."""
    y = samples.original
    h = samples.grid.step
    end = boundary_derivatives(y, h, match_order, "right", derivative_source, f)
    start = boundary_derivatives(y, h, match_order, "left", derivative_source, f)
    return build_blend(y[-1], y[0], end, start, samples.data_arc[1], TWO_PI)


def fill_phantom(
    samples: SampleSet,
    config: PhantomConfig,
    f: SourceFunction | None = None,
) -> SampleSet:
    """Return a complete copy of ``samples`` with the phantom slots filled."""
    if samples.phantom_count != 2 * config.pairs:
        raise ValueError(
            f"sample set has {samples.phantom_count} phantom slots, config expects {2 * config.pairs}"
        )
    if config.derivative_source == "explicit_values":
        return samples.with_phantom(config.explicit_values)
    blend = phantom_blend(samples, config.match_order, config.derivative_source, f)
    tau = samples.grid.nodes()[samples.original_count:]
    return samples.with_phantom(blend(tau))


__all__ = [
    "DERIVATIVE_SOURCES",
    "HermiteBlend",
    "PhantomConfig",
    "boundary_derivatives",
    "build_blend",
    "fill_phantom",
    "phantom_blend",
]
