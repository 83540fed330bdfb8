"""Exit criteria. Each test prints one PASS/FAIL line; run with ``-s`` to see them."""

import dataclasses
import math
import time
import warnings

import numpy as np
import pytest
from click.testing import CliRunner

from phantomspline.analysis import build_variant, relative_error, run_table
from phantomspline.cli import cli
from phantomspline.grid import get_source
from phantomspline.optimize import default_search, optimize_phantom
from phantomspline.phantom import build_blend
from phantomspline.spline import alias_factor, build_spline, dft_odd, log_log_slope, trig_polynomial

pytestmark = pytest.mark.filterwarnings("ignore:tail tolerance:RuntimeWarning")


@pytest.fixture
def verdict(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        assert ok, f"{criterion}: {detail}"

    return emit


def test_c1_node_exactness(verdict):
    start = time.perf_counter()
    worst = 0.0
    cases = 0
    for name in ("ramp", "sine75", "exp02"):
        f = get_source(name)
        for n in (9, 13):
            for k in (0, 1, 2):
                for p in ((0,) if k == 0 else (0, 1, 2)):
                    for r in (1, 3, 5):
                        samples, s = build_variant(f, n, k, p, r)
                        y = samples.values
                        worst = max(worst, s.node_residual(y) / (1 + np.max(np.abs(y))))
                        cases += 1
    elapsed = time.perf_counter() - start
    verdict("C1 node exactness", worst <= 1e-9 and elapsed < 5.0,
            f"{cases} configurations, max scaled residual {worst:.2e} (<= 1e-9), {elapsed:.2f} s (< 5 s)")


def test_c2_alias_factor_oracle(verdict):
    start = time.perf_counter()
    value = alias_factor(1, 3, 1, 10**6)
    elapsed = time.perf_counter() - start
    exact = 4 * math.pi**2 / 27
    reflection = math.pi**2 / math.sin(math.pi / 3) ** 2 / 9
    brute = math.fsum(1 / (3 * m + 1) ** 2 + 1 / (3 * m + 2) ** 2 for m in range(10**6 + 1))
    ok = (
        abs(value / exact - 1) < 1e-6
        and abs(reflection / exact - 1) < 1e-14
        and abs(value / brute - 1) < 1e-12
        and elapsed < 1.0
    )
    verdict("C2 alias factor", ok,
            f"H_1 = {value:.12f}, 4 pi^2/27 = {exact:.12f}, rel {abs(value / exact - 1):.1e} (< 1e-6), {elapsed:.3f} s")


@pytest.mark.parametrize("name,n,lo,hi,target", [
    ("ramp_integer", 9, 0.06, 0.24, 0.12),
    ("sine75", 9, 0.02, 0.09, 0.043),
    ("exp02", 13, 0.08, 0.32, 0.16),
])
def test_c3_table_baselines(verdict, name, n, lo, hi, target):
    f = get_source(name, n)
    _, s = build_variant(f, n, 0, r=3)
    e = relative_error(s, f, n)
    verdict(f"C3 baseline {name} N={n}", lo <= e <= hi, f"error {e:.4f} in [{lo}, {hi}] (reference {target})")


@pytest.mark.parametrize("label,name,target,check_order", [
    ("ramp", "ramp_integer", (3, 5.5, 11.6), True),
    ("sine", "sine75", (4.1, 31.3, 45.3), True),
    ("exp", "exp02", (1.7, 4.7, 2.7), False),
])
def test_c4_reduction_factor_ordering(verdict, label, name, target, check_order):
    f = get_source(name, 9)
    (rep,) = run_table(f, 9, (1,), 3)
    e = rep.variant_errors
    factors = [rep.reduction_factors[p] for p in (0, 1, 2)]
    ordered = e[0] >= e[1] >= e[2]
    hard = (ordered or not check_order) and all(v >= 1.5 for v in factors)
    soft = all(ref / 3 <= v <= ref * 3 for v, ref in zip(factors, target))
    shown = ", ".join(f"{v:.2f}" for v in factors)
    verdict(f"C4 {label} k=1 ordering (hard)", hard,
            f"factors ({shown}) >= 1.5, errors ordered: {ordered}{'' if check_order else ' (row exempt)'}")
    verdict(f"C4 {label} k=1 vs target (soft)", soft, f"factors ({shown}) within x3 of {target}")


@pytest.mark.parametrize("r", [1, 3, 5])
def test_c5_spectral_decay(verdict, r):
    M = 9
    s = build_spline(np.random.default_rng(r).normal(size=M), r, depth=5)
    half = s.frequencies.size // 2
    slopes = []
    for j in range(1, 5):
        mu = np.array([m * M + j for m in range(6)])
        idx = [int(np.flatnonzero(s.frequencies[:half] == v)[0]) for v in mu]
        slopes.append(log_log_slope(mu, s.cos_amplitudes[idx]))
    worst = max(abs(v + (r + 1)) for v in slopes)
    verdict(f"C5 spectral decay r={r}", worst <= 0.05,
            f"slopes {[round(v, 4) for v in slopes]}, target {-(r + 1)} +- 0.05")


def test_c6_polynomial_limit(verdict):
    rng = np.random.default_rng(6)
    y = rng.normal(size=9)
    t = np.linspace(0, 2 * np.pi, 1000, endpoint=False)
    T = trig_polynomial(dft_odd(y), t)
    gaps = [float(np.max(np.abs(build_spline(y, r)(t) - T))) for r in (3, 7, 15, 31, 51)]
    t_rand = rng.uniform(0, 2 * np.pi, 1000)
    gap51 = float(np.max(np.abs(build_spline(y, 51)(t_rand) - trig_polynomial(dft_odd(y), t_rand))))
    monotone = all(b <= a for a, b in zip(gaps, gaps[1:]))
    verdict("C6 polynomial limit", gap51 < 1e-4 and monotone,
            f"max|S_51 - T| = {gap51:.2e} (< 1e-4); gaps r=3..51 {[f'{g:.1e}' for g in gaps]} monotone: {monotone}")


def _vandermonde(end, start, width):
    p = len(end) - 1
    size = 2 * p + 2
    rows, rhs = [], []
    for x, targets in ((0.0, end), (width, start)):
        for q in range(p + 1):
            rows.append([math.factorial(i) / math.factorial(i - q) * x ** (i - q) if i >= q else 0.0 for i in range(size)])
            rhs.append(targets[q])
    return np.linalg.solve(np.array(rows), np.array(rhs))


def test_c7_hermite_oracle(verdict):
    rng = np.random.default_rng(7)
    worst = 0.0
    for p in (0, 1, 2):
        for _ in range(50):
            end, start = rng.normal(size=(2, p + 1))
            left = rng.uniform(3.0, 5.5)
            right = 2 * np.pi
            blend = build_blend(end[0], start[0], end[1:], start[1:], left, right)
            oracle = _vandermonde(end, start, right - left)
            worst = max(worst, float(np.max(np.abs(np.array(blend.poly_coeffs) - oracle))))
    verdict("C7 Hermite oracle", worst <= 1e-10, f"150 draws, max coefficient gap {worst:.2e} (<= 1e-10)")


def _neighbours(x, res):
    for i in range(x.size):
        for d in (res, -res):
            y = x.copy()
            y[i] += d
            yield y


@pytest.mark.parametrize("name,n,target,reference", [("sine75", 9, 100, 226.3), ("exp02", 13, 40, 84.2)])
def test_c8_optimizer(verdict, name, n, target, reference):
    start = time.perf_counter()
    f = get_source(name, n)
    obj, spec = default_search(f, n, 1)
    result = optimize_phantom(spec)
    again = optimize_phantom(spec)
    finer = optimize_phantom(dataclasses.replace(spec, resolution=spec.resolution / 2))
    elapsed = time.perf_counter() - start
    monotone = result.best_error <= obj(np.array(spec.initial))
    local = all(obj(nb) >= result.best_error for nb in _neighbours(result.best_values, spec.resolution))
    deterministic = (again.best_values.tobytes() == result.best_values.tobytes()
                     and again.best_error == result.best_error and again.evaluations == result.evaluations)
    refined = finer.best_error <= result.best_error
    _, base = build_variant(f, n, 0)
    factor = relative_error(base, f, n) / result.best_error
    verdict(f"C8 optimizer {name} N={n} contracts (hard)", monotone and local and deterministic and refined and elapsed < 60,
            f"monotone {monotone}, lattice-optimal {local}, deterministic {deterministic}, "
            f"refinement {finer.best_error:.3e} <= {result.best_error:.3e}: {refined}, {elapsed:.1f} s")
    verdict(f"C8 optimizer {name} N={n} reduction (soft)", factor >= target,
            f"reduction {factor:.1f}x (>= {target}, reference {reference})")


@pytest.mark.parametrize("args", [
    ["interpolate", "--function", "sine75", "--n", "9", "--k", "1", "--p", "2"],
    ["table", "--function", "exp02", "--n", "9", "--format", "json"],
    ["optimize", "--function", "exp02", "--n", "13", "--k", "1"],
    ["plot", "--function", "ramp_integer", "--n", "9", "--k", "0"],
])
def test_c9_cli_determinism(verdict, tmp_path, args):
    runner = CliRunner()
    outputs = []
    for i in range(2):
        path = tmp_path / f"run{i}.out"
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = runner.invoke(cli, args + ["-o", str(path)])
        assert res.exit_code == 0, res.output
        outputs.append(path.read_bytes())
    verdict(f"C9 determinism {args[0]}", outputs[0] == outputs[1], f"{len(outputs[0])} bytes, identical: {outputs[0] == outputs[1]}")
