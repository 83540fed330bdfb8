"""Uniform circle grids, sample sets and the builtin source functions.

A finite-interval sample sequence of length ``N`` is placed on the first ``N``
nodes of an ``M = N + 2k`` point grid on ``[0, 2*pi)``; the trailing ``2k``
nodes are phantom slots that get filled later (see :mod:`phantomspline.phantom`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CircleGrid:
    """``node_count`` equally spaced nodes ``tau_i = i * step`` on ``[0, 2*pi)``."""

    node_count: int

    def __post_init__(self):
        m = self.node_count
        if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
            raise TypeError(f"node_count must be an integer, got {m!r}")
        if m < 3:
            raise ValueError(f"node_count must be >= 3, got {m}")
        if m % 2 == 0:
            raise ValueError(f"node_count must be odd, got {m}")

    @property
    def step(self) -> float:
        return TWO_PI / self.node_count

    @property
    def harmonics(self) -> int:
        """Highest harmonic ``n = (M - 1) / 2`` resolved by the grid."""
        return (self.node_count - 1) // 2

    def nodes(self) -> np.ndarray:
        return np.arange(self.node_count) * self.step


def make_grid(node_count: int) -> CircleGrid:
    return CircleGrid(node_count)


@dataclass(frozen=True)
class SampleSet:
    """Values attached to a :class:`CircleGrid`.

    Entries ``0 .. original_count - 1`` are the original data; the rest are
    phantom slots. Unfilled phantom slots hold NaN.
    """

    grid: CircleGrid
    values: np.ndarray
    original_count: int

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        m = self.grid.node_count
        if vals.shape != (m,):
            raise ValueError(f"expected {m} values for the grid, got shape {vals.shape}")
        n = self.original_count
        if not 1 <= n <= m:
            raise ValueError(f"original_count must lie in [1, {m}], got {n}")
        if (m - n) % 2:
            raise ValueError(f"phantom slot count {m - n} must be even")
        if not np.all(np.isfinite(vals[:n])):
            bad = int(np.flatnonzero(~np.isfinite(vals[:n]))[0])
            raise ValueError(f"original value at node {bad + 1} is not finite")
        phantom = vals[n:]
        if np.any(np.isinf(phantom)):
            raise ValueError("phantom values must be finite or NaN (unfilled)")

    @property
    def phantom_count(self) -> int:
        return self.grid.node_count - self.original_count

    @property
    def pairs(self) -> int:
        return self.phantom_count // 2

    @property
    def original(self) -> np.ndarray:
        return self.values[: self.original_count]

    @property
    def phantom(self) -> np.ndarray:
        return self.values[self.original_count:]

    @property
    def is_complete(self) -> bool:
        return not np.any(np.isnan(self.values))

    @property
    def data_arc(self) -> tuple[float, float]:
        """Arc ``[0, (N - 1) h]`` occupied by the original data."""
        return 0.0, (self.original_count - 1) * self.grid.step

    def with_phantom(self, phantom_values: Sequence[float]) -> "SampleSet":
        phantom_values = np.asarray(phantom_values, dtype=float)
        if phantom_values.shape != (self.phantom_count,):
            raise ValueError(
                f"expected {self.phantom_count} phantom values, got {phantom_values.size}"
            )
        if not np.all(np.isfinite(phantom_values)):
            raise ValueError("phantom values must be finite")
        vals = np.concatenate([self.original, phantom_values])
        return SampleSet(self.grid, vals, self.original_count)


def place_on_circle(original: Sequence[float], phantom_pairs: int = 0) -> SampleSet:
    """Put ``N`` original samples on an ``N + 2k`` node grid, phantom slots empty."""
    original = np.asarray(original, dtype=float)
    if original.ndim != 1:
        raise ValueError("original samples must be a 1-D sequence")
    n = original.size
    if n < 3:
        raise ValueError(f"need at least 3 original samples, got {n}")
    if phantom_pairs < 0:
        raise ValueError(f"phantom_pairs must be >= 0, got {phantom_pairs}")
    m = n + 2 * phantom_pairs
    if m % 2 == 0:
        raise ValueError(
            f"N + 2k = {n} + {2 * phantom_pairs} = {m} is even; an odd node count is required"
        )
    vals = np.concatenate([original, np.full(2 * phantom_pairs, np.nan)])
    return SampleSet(CircleGrid(m), vals, n)


@dataclass(frozen=True)
class SourceFunction:
    """A reference function on ``[0, 2*pi]`` with optional derivatives.

    ``derivatives[q - 1]`` evaluates the q-th derivative. ``smoothness``
    records the class ``W^r`` the function is used to represent.
    """

    id: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    derivatives: tuple[Callable[[np.ndarray], np.ndarray], ...] = ()
    smoothness: int = 3
    description: str = field(default="", compare=False)

    def __call__(self, x):
        return self.evaluator(np.asarray(x, dtype=float))

    def derivative(self, x, q: int):
        if q == 0:
            return self(x)
        if not 1 <= q <= len(self.derivatives):
            raise ValueError(f"{self.id}: no evaluator for derivative of order {q}")
        return self.derivatives[q - 1](np.asarray(x, dtype=float))


def _ramp() -> SourceFunction:
    return SourceFunction(
        "ramp",
        lambda x: x + 1.0,
        (lambda x: np.ones_like(x), lambda x: np.zeros_like(x)),
        description="f(t) = t + 1",
    )


def _ramp_integer(n: int) -> SourceFunction:
    # values 1..n at the n sample nodes
    s = (n - 1) / TWO_PI
    return SourceFunction(
        "ramp_integer",
        lambda x: 1.0 + s * x,
        (lambda x: np.full_like(x, s), lambda x: np.zeros_like(x)),
        description=f"f(t) = 1 + {n - 1} t / (2 pi), samples 1..{n}",
    )


def _sine75() -> SourceFunction:
    return SourceFunction(
        "sine75",
        lambda x: np.sin(0.75 * x),
        (lambda x: 0.75 * np.cos(0.75 * x), lambda x: -0.5625 * np.sin(0.75 * x)),
        description="f(t) = sin(0.75 t)",
    )


def _exp02() -> SourceFunction:
    return SourceFunction(
        "exp02",
        lambda x: 0.02 * np.exp(x),
        (lambda x: 0.02 * np.exp(x), lambda x: 0.02 * np.exp(x)),
        description="f(t) = 0.02 exp(t)",
    )


BUILTIN_FUNCTIONS = ("ramp", "ramp_integer", "sine75", "exp02")


def get_source(name: str, n: int | None = None) -> SourceFunction:
    """Look up a builtin source function.

    ``ramp_integer`` depends on the sample count, so ``n`` is required for it.
    """
    if name == "ramp":
        return _ramp()
    if name == "ramp_integer":
        if n is None:
            raise ValueError("ramp_integer needs the sample count n")
        return _ramp_integer(n)
    if name == "sine75":
        return _sine75()
    if name == "exp02":
        return _exp02()
    raise ValueError(f"unknown function {name!r}; choose from {', '.join(BUILTIN_FUNCTIONS)}")


def sample_points(n: int) -> np.ndarray:
    """Sample abscissae ``2*pi*(i-1)/(n-1)``, both interval ends included."""
    if n < 2:
        raise ValueError(f"need n >= 2 samples, got {n}")
    return np.arange(n) * (TWO_PI / (n - 1))


def sample_source(f: SourceFunction | Callable, n: int) -> np.ndarray:
    x = sample_points(n)
    x[-1] = TWO_PI
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape).astype(float)
    bad = np.flatnonzero(~np.isfinite(y))
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"non-finite value {y[i]!r} at node {i + 1} (x = {x[i]!r})")
    return y


def read_samples_csv(path: str | Path) -> np.ndarray:
    """Read one value per line; lines starting with '#' and blank lines are skipped."""
    path = Path(path)
    values = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                values.append(float(text.split(",")[0]))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: cannot parse {text!r} as a number") from None
    if not values:
        raise ValueError(f"{path}: no sample values found")
    arr = np.array(values)
    if not np.all(np.isfinite(arr)):
        i = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValueError(f"{path}: value {i + 1} is not finite")
    return arr
