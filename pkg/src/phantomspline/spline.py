"""Periodic trigonometric interpolation splines of order r on odd grids.

The spline keeps the discrete spectrum ``(a_j, b_j)`` of the interpolating
trigonometric polynomial and spreads every harmonic ``j`` over its aliases
``m*M + j`` and ``(m+1)*M - j``, weighted by ``mu**-(r+1)`` and normalised by

    H_j = sum_m [ (m*M + j)**-(r+1) + ((m+1)*M - j)**-(r+1) ].

On the grid every alias collapses back onto harmonic ``j`` (cosines keep their
sign, reflected sines flip it), so the normalisation makes the series
interpolate the samples exactly whatever the truncation depth. Term-by-term
the series lies in ``C^(r-1)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import zeta

from .grid import TWO_PI, CircleGrid, SampleSet

DEFAULT_TAIL_TOLERANCE = 1e-10
DEFAULT_MAX_DEPTH = 2000

_I_POWERS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


@dataclass(frozen=True)
class FourierCoefficients:
    """Discrete spectrum ``a_0..a_n``, ``b_1..b_n`` of an odd ``M``-point sample."""

    a: np.ndarray
    b: np.ndarray
    node_count: int

    @property
    def n(self) -> int:
        return (self.node_count - 1) // 2

    def __post_init__(self):
        n = (self.node_count - 1) // 2
        if len(self.a) != n + 1 or len(self.b) != n:
            raise ValueError(
                f"coefficient lengths ({len(self.a)}, {len(self.b)}) do not match n = {n}"
            )


def _as_samples(samples: SampleSet | Sequence[float]) -> SampleSet:
    if isinstance(samples, SampleSet):
        return samples
    y = np.asarray(samples, dtype=float)
    return SampleSet(CircleGrid(y.size), y, y.size)


def dft_odd(samples: SampleSet | Sequence[float]) -> FourierCoefficients:
    """Direct-summation DFT of a complete sample set on an odd grid.

    ``a_j = (2/M) sum_i y_i cos(j tau_i)``, ``b_j = (2/M) sum_i y_i sin(j tau_i)``.
    """
    samples = _as_samples(samples)
    if not samples.is_complete:
        missing = np.flatnonzero(np.isnan(samples.values)) + 1
        raise ValueError(f"sample set has unfilled phantom slots at nodes {missing.tolist()}")
    m = samples.grid.node_count
    n = samples.grid.harmonics
    # reduce j*i mod M so the angle stays in [0, 2 pi)
    ji = np.outer(np.arange(n + 1), np.arange(m)) % m
    angle = ji * samples.grid.step
    y = samples.values
    a = (2.0 / m) * (np.cos(angle) @ y)
    b = (2.0 / m) * (np.sin(angle[1:]) @ y)
    return FourierCoefficients(a, b, m)


def alias_factor(j: int, M: int, r: int, m_max: int) -> float:
    """Convergence factor ``H_j`` summed over alias levels ``0..m_max``."""
    if not 1 <= j <= (M - 1) // 2:
        raise ValueError(f"harmonic index j = {j} outside [1, {(M - 1) // 2}] for M = {M}")
    if r < 1:
        raise ValueError(f"order r must be >= 1, got {r}")
    if m_max < 0:
        raise ValueError(f"m_max must be >= 0, got {m_max}")
    s = r + 1.0
    m = np.arange(m_max, -1, -1, dtype=float)  # smallest terms first
    terms = (m * M + j) ** -s + ((m + 1) * M - j) ** -s
    return float(np.sum(terms))


def alias_tail_bound(M: int, r: int, m_max: int) -> float:
    """``sum_{m > m_max} 2 / (m*M)**(r+1)``, which dominates the neglected part of every ``H_j``."""
    s = r + 1.0
    return float(2.0 * M ** -s * zeta(s, m_max + 1))


def truncation_depth(M: int, r: int, tail_tolerance: float, max_depth: int = DEFAULT_MAX_DEPTH) -> tuple[int, float]:
    """Smallest depth whose tail bound is below ``tail_tolerance * min_j H_j``.

    Returns ``(depth, relative_bound)``. If the tolerance needs more than
    ``max_depth`` levels the depth is capped and a warning is issued.
    """
    if tail_tolerance <= 0:
        raise ValueError("tail_tolerance must be positive")
    n = (M - 1) // 2
    j = np.arange(1, n + 1, dtype=float)
    s = r + 1.0
    h_min = float(np.min(j ** -s + (M - j) ** -s))  # depth-0 value, a lower bound for H_j

    def rel(k):
        return alias_tail_bound(M, r, k) / h_min

    if rel(max_depth) >= tail_tolerance:
        warnings.warn(
            f"tail tolerance {tail_tolerance:g} needs more than {max_depth} alias levels "
            f"for r = {r}, M = {M}; using {max_depth} (relative tail {rel(max_depth):.3g})",
            RuntimeWarning,
            stacklevel=3,
        )
        return max_depth, rel(max_depth)
    lo, hi = -1, max_depth  # rel(lo) unknown/too big, rel(hi) ok
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rel(mid) < tail_tolerance:
            hi = mid
        else:
            lo = mid
    return hi, rel(hi)


@dataclass(frozen=True)
class TrigSpline:
    """Truncated order-``r`` trigonometric spline; call it to evaluate.

    ``alias_factors[j-1]`` is ``H_j``. ``tail_bound`` is the relative bound
    on the part of ``H_j`` dropped by truncating at ``truncation_depth``.
    """

    order: int
    coeffs: FourierCoefficients
    grid: CircleGrid
    alias_factors: np.ndarray
    truncation_depth: int
    tail_tolerance: float
    tail_bound: float
    frequencies: np.ndarray = field(repr=False)
    cos_amplitudes: np.ndarray = field(repr=False)
    sin_amplitudes: np.ndarray = field(repr=False)

    @property
    def constant(self) -> float:
        return 0.5 * float(self.coeffs.a[0])

    def __call__(self, t):
        return self.derivative(t, 0)

    def derivative(self, t, q: int = 1):
        """Term-by-term derivative of order ``q``; only ``q <= r - 1`` is allowed."""
        if not 0 <= q <= self.order - 1:
            raise ValueError(
                f"derivative order {q} outside [0, {self.order - 1}] for an order-{self.order} spline"
            )
        scalar = np.ndim(t) == 0
        t = np.mod(np.atleast_1d(np.asarray(t, dtype=float)), TWO_PI)
        flat = t.ravel()
        M = self.grid.node_count
        n = self.grid.harmonics
        # A cos(mu t) + B sin(mu t) = Re[(A - iB) e^{i mu t}]; each derivative multiplies by i mu
        c = (self.cos_amplitudes - 1j * self.sin_amplitudes) * (self.frequencies ** q * _I_POWERS[q % 4])
        c = c.reshape(2, self.truncation_depth + 1, n)
        # alias level m contributes z**m with z = e^{iMt}: Horner over m
        z = np.exp(1j * M * flat)[:, None]
        up = np.broadcast_to(c[0, -1], (flat.size, n)).copy()
        down = np.broadcast_to(c[1, -1], (flat.size, n)).copy()
        for level in range(self.truncation_depth - 1, -1, -1):
            up = up * z + c[0, level]
            down = down * z + c[1, level]
        e = np.exp(1j * np.multiply.outer(flat, np.arange(1, n + 1)))
        out = (e * up + np.conj(e) * z * down).real.sum(axis=1)
        if q == 0:
            out += self.constant
        out = out.reshape(t.shape)
        return float(out[0]) if scalar else out

    def node_residual(self, values: Sequence[float]) -> float:
        """Largest ``|S(tau_i) - y_i|`` over the grid nodes."""
        y = np.asarray(values, dtype=float)
        return float(np.max(np.abs(self(self.grid.nodes()) - y)))


def build_spline(
    samples: SampleSet | Sequence[float],
    r: int = 3,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
    *,
    depth: int | None = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> TrigSpline:
    """Build the order-``r`` interpolating trigonometric spline of ``samples``.

    ``depth`` forces the alias truncation level instead of deriving it from
    ``tail_tolerance``.
    """
    if isinstance(r, bool) or int(r) != r or r < 1:
        raise ValueError(f"order r must be an integer >= 1, got {r!r}")
    r = int(r)
    samples = _as_samples(samples)
    coeffs = dft_odd(samples)
    M = samples.grid.node_count
    n = samples.grid.harmonics
    if depth is None:
        depth, bound = truncation_depth(M, r, tail_tolerance, max_depth)
    else:
        if depth < 0:
            raise ValueError(f"depth must be >= 0, got {depth}")
        j = np.arange(1, n + 1, dtype=float)
        h_min = float(np.min(j ** -(r + 1.0) + (M - j) ** -(r + 1.0)))
        bound = alias_tail_bound(M, r, depth) / h_min

    s = r + 1.0
    j = np.arange(1, n + 1, dtype=float)
    m = np.arange(depth + 1, dtype=float)[:, None]
    up = m * M + j  # (depth+1, n)
    down = (m + 1) * M - j
    # weights relative to the base harmonic keep large r out of underflow
    w_up = (j / up) ** s
    w_down = (j / down) ** s
    norm = w_up[::-1].sum(axis=0) + w_down[::-1].sum(axis=0)
    alias_factors = norm * j ** -s

    a = coeffs.a[1:]
    b = coeffs.b
    freqs = np.concatenate([up.ravel(), down.ravel()])
    cos_amp = np.concatenate([(a * w_up / norm).ravel(), (a * w_down / norm).ravel()])
    sin_amp = np.concatenate([(b * w_up / norm).ravel(), (-b * w_down / norm).ravel()])
    return TrigSpline(
        order=r,
        coeffs=coeffs,
        grid=samples.grid,
        alias_factors=alias_factors,
        truncation_depth=depth,
        tail_tolerance=tail_tolerance,
        tail_bound=bound,
        frequencies=freqs,
        cos_amplitudes=cos_amp,
        sin_amplitudes=sin_amp,
    )


def trig_polynomial(coeffs: FourierCoefficients, t):
    """Evaluate ``T(t) = a_0/2 + sum_j a_j cos(jt) + b_j sin(jt)``."""
    t = np.asarray(t, dtype=float)
    j = np.arange(1, coeffs.n + 1)
    arg = np.multiply.outer(np.mod(t, TWO_PI), j)
    return 0.5 * coeffs.a[0] + np.cos(arg) @ coeffs.a[1:] + np.sin(arg) @ coeffs.b


def cardinal_basis(
    grid: CircleGrid,
    r: int,
    t,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
    **kwargs,
) -> np.ndarray:
    """Matrix ``B`` with ``B @ y == build_spline(y, r)(t)`` for any samples ``y``.

    Column ``i`` is the spline of the ``i``-th unit sample vector.
    """
    t = np.asarray(t, dtype=float)
    M = grid.node_count
    cols = []
    for i in range(M):
        e = np.zeros(M)
        e[i] = 1.0
        cols.append(build_spline(SampleSet(grid, e, M), r, tail_tolerance, **kwargs)(t))
    return np.stack(cols, axis=-1)


def log_log_slope(freqs, amps) -> float:
    """Least-squares slope of ``log|amp|`` against ``log freq``."""
    x = np.log(np.asarray(freqs, dtype=float))
    y = np.log(np.abs(np.asarray(amps, dtype=float)))
    return float(np.polyfit(x, y, 1)[0])


__all__ = [
    "FourierCoefficients",
    "TrigSpline",
    "alias_factor",
    "alias_tail_bound",
    "build_spline",
    "cardinal_basis",
    "dft_odd",
    "log_log_slope",
    "trig_polynomial",
    "truncation_depth",
]

