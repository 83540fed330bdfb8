"""Lattice coordinate descent over phantom-node values.

The spline is linear in its samples, so the objective precomputes the
cardinal basis on the error grid once; each evaluation is then one small
matrix-vector product.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .analysis import DEFAULT_DENSE, Normalization, reference_on_circle
from .grid import SourceFunction, place_on_circle, sample_source
from .phantom import DerivativeSource, PhantomConfig, fill_phantom
from .spline import DEFAULT_TAIL_TOLERANCE, cardinal_basis

Objective = Callable[[np.ndarray], float]


class PhantomObjective:
    """Relative sup-norm error on the data arc as a function of the phantom values."""

    def __init__(
        self,
        f: SourceFunction,
        n: int,
        k: int,
        r: int = 3,
        dense: int = DEFAULT_DENSE,
        normalize: Normalization = "sup",
        tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
    ):
        if k < 1:
            raise ValueError(f"need at least one phantom pair, got k = {k}")
        self.f, self.n, self.k, self.r = f, n, k, r
        self.samples = place_on_circle(sample_source(f, n), k)
        h = self.samples.grid.step
        t = np.linspace(0.0, (n - 1) * h, dense)
        basis = cardinal_basis(self.samples.grid, r, t, tail_tolerance)
        ref = reference_on_circle(f, n, h, t)
        self._fixed = basis[:, :n] @ self.samples.original - ref
        self._phantom_basis = np.ascontiguousarray(basis[:, n:])
        denom = float(np.max(np.abs(ref))) if normalize == "sup" else float(np.ptp(ref))
        self._scale = 1.0 / denom if denom > 0 else 1.0

    def __call__(self, values) -> float:
        values = np.asarray(values, dtype=float)
        if values.shape != (2 * self.k,):
            raise ValueError(f"expected {2 * self.k} phantom values, got shape {values.shape}")
        return float(np.max(np.abs(self._fixed + self._phantom_basis @ values))) * self._scale

    def hermite_start(self, match_order: int = 2, source: DerivativeSource = "divided_difference") -> np.ndarray:
        filled = fill_phantom(self.samples, PhantomConfig(self.k, match_order, source), self.f)
        return filled.phantom.copy()

    @property
    def data_range(self) -> float:
        return float(np.ptp(self.samples.original))


@dataclass(frozen=True)
class SearchSpec:
    """Coordinate-descent settings.

    The search walks the lattice ``initial + i * resolution``. When
    ``coarsest`` is set, it first runs on the coarser lattices
    ``resolution * 2**j`` (largest first, none above ``coarsest``), each
    level warm-started from the previous one. Because the level ladder only
    depends on ``coarsest``, halving ``resolution`` replays the same coarse
    levels and then adds one finer level.
    """

    objective: Objective
    initial: tuple[float, ...]
    resolution: float = 0.01
    box_halfwidth: tuple[float, ...] | float | None = None
    max_sweeps: int = 200
    coarsest: float | None = None

    def __post_init__(self):
        if not self.resolution > 0:
            raise ValueError(f"resolution must be positive, got {self.resolution}")
        if self.max_sweeps < 1:
            raise ValueError(f"max_sweeps must be >= 1, got {self.max_sweeps}")
        object.__setattr__(self, "initial", tuple(float(v) for v in self.initial))
        half = self.halfwidths
        if np.any(half <= 0):
            raise ValueError("box half-widths must be positive")

    @property
    def halfwidths(self) -> np.ndarray:
        d = len(self.initial)
        if self.box_halfwidth is None:
            return np.full(d, np.inf)
        return np.broadcast_to(np.asarray(self.box_halfwidth, dtype=float), (d,)).copy()

    def levels(self) -> list[int]:
        """Lattice steps of each level in units of ``resolution``, coarse to fine."""
        if self.coarsest is None or self.coarsest < 2 * self.resolution:
            return [1]
        top = int(math.floor(math.log2(self.coarsest / self.resolution) + 1e-12))
        return [2**j for j in range(top, -1, -1)]


@dataclass(frozen=True)
class SearchResult:
    best_values: np.ndarray
    best_error: float
    initial_error: float
    evaluations: int
    sweeps: int
    converged: bool  # last level ended on a sweep without improvement


def optimize_phantom(spec: SearchSpec) -> SearchResult:
    """Cyclic coordinate descent with greedy line walks on the resolution lattice.

    Per coordinate: step ``+resolution`` while the objective strictly
    improves; if the first ``+`` step fails, walk ``-resolution`` instead.
    Sweeps repeat until one makes no move or ``max_sweeps`` is reached.
    Ties keep the incumbent.
    """
    x0 = np.asarray(spec.initial, dtype=float)
    half = spec.halfwidths
    res = spec.resolution
    evaluations = 0

    def point(units):
        return x0 + units * res

    def evaluate(units):
        nonlocal evaluations
        evaluations += 1
        return float(spec.objective(point(units)))

    units = np.zeros(x0.size, dtype=np.int64)
    best = evaluate(units)
    if not math.isfinite(best):
        raise ValueError(f"objective is not finite at the initial point ({best})")
    initial_error = best
    limit = np.floor(half / res + 1e-9)  # lattice units allowed per coordinate

    sweeps = 0
    converged = False
    for step in spec.levels():
        converged = False
        for _ in range(spec.max_sweeps):
            sweeps += 1
            moved_any = False
            for i in range(x0.size):
                for direction in (1, -1):
                    moved = False
                    while True:
                        cand = units.copy()
                        cand[i] += direction * step
                        if abs(cand[i]) > limit[i]:
                            break
                        value = evaluate(cand)
                        if value < best:
                            units, best = cand, value
                            moved = True
                        else:
                            break
                    if moved:
                        moved_any = True
                        break
            if not moved_any:
                converged = True
                break
    return SearchResult(point(units), best, initial_error, evaluations, sweeps, converged)


def grid_search(objective: Objective, center: Sequence[float], resolution: float, halfwidth_steps: int):
    """Exhaustive scan of the ``(2s+1)**d`` lattice points around ``center``.

    Returns ``(best_values, best_error)``; ties resolve to the first point in
    lexicographic order of the offsets.
    """
    center = np.asarray(center, dtype=float)
    offsets = range(-halfwidth_steps, halfwidth_steps + 1)
    best_x, best = None, math.inf
    for combo in itertools.product(offsets, repeat=center.size):
        x = center + np.asarray(combo) * resolution
        value = float(objective(x))
        if value < best:
            best_x, best = x, value
    return best_x, best


def default_search(
    f: SourceFunction,
    n: int,
    k: int,
    r: int = 3,
    *,
    resolution: float = 0.01,
    coarsest: float | None = 1.0,
    max_sweeps: int = 200,
    dense: int = DEFAULT_DENSE,
    normalize: Normalization = "sup",
    start_order: int = 2,
) -> tuple[PhantomObjective, SearchSpec]:
    """Objective plus a spec started from the two-derivative Hermite phantom values.

    The box half-width is five times the data range (1 for constant data).
    """
    objective = PhantomObjective(f, n, k, r, dense, normalize)
    initial = objective.hermite_start(start_order)
    span = objective.data_range
    spec = SearchSpec(
        objective,
        tuple(initial),
        resolution=resolution,
        box_halfwidth=5.0 * span if span > 0 else 1.0,
        max_sweeps=max_sweeps,
        coarsest=coarsest,
    )
    return objective, spec


__all__ = [
    "PhantomObjective",
    "SearchResult",
    "SearchSpec",
    "default_search",
    "grid_search",
    "optimize_phantom",
]
