"""
Command-line interface.

Usage:
    phantomspline interpolate --function sine75 --n 9 --k 1 --p 2
    phantomspline interpolate --input samples.csv --k 1 --p 0 -o out.json
    phantomspline table --function sine75 --n 9
    phantomspline optimize --function exp02 --n 13 --k 1
    phantomspline plot --function ramp_integer --n 9 --k 0 -o fig1.csv
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import click
import numpy as np

from . import _io
from .analysis import (
    DEFAULT_DENSE,
    build_variant,
    curve_csv,
    emit_curve,
    relative_error,
    render_csv,
    render_markdown,
    run_table,
)
from .grid import BUILTIN_FUNCTIONS, get_source, place_on_circle, read_samples_csv, sample_source
from .optimize import default_search, optimize_phantom
from .phantom import DERIVATIVE_SOURCES, PhantomConfig, fill_phantom
from .spline import build_spline

COMMANDS = ("interpolate", "table", "optimize", "plot")
FORMATS = ("csv", "json", "markdown")
_DEFAULT_FORMAT = {"interpolate": "json", "table": "markdown", "optimize": "json", "plot": "csv"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    function_id: str | None = None
    input_path: str | None = None
    n: int | None = None
    k: int = 1
    k_values: tuple[int, ...] = (1, 2)
    p: int = 2
    r: int = 3
    derivative_source: str = "divided_difference"
    phantom_values: tuple[float, ...] | None = None
    output: str | None = None
    format: str | None = None
    dense: int = DEFAULT_DENSE
    resolution: float = 0.01
    coarsest: float | None = 1.0
    max_sweeps: int = 200
    normalize: str = "sup"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"command: unknown command {self.command!r}")
        if (self.function_id is None) == (self.input_path is None):
            raise ConfigError("function/input: give exactly one of --function or --input")
        if self.input_path is not None and self.command != "interpolate":
            raise ConfigError(f"input: '{self.command}' needs a reference --function, not --input")
        if self.function_id is not None:
            if self.function_id not in BUILTIN_FUNCTIONS:
                raise ConfigError(
                    f"function: unknown function {self.function_id!r}; choose from {', '.join(BUILTIN_FUNCTIONS)}"
                )
            if self.n is None:
                raise ConfigError("n: --n is required with --function")
        if self.n is not None and self.n < 3:
            raise ConfigError(f"n: need at least 3 samples, got {self.n}")
        if self.k < 0:
            raise ConfigError(f"k: must be >= 0, got {self.k}")
        if self.command == "optimize" and self.k < 1:
            raise ConfigError("k: optimize needs at least one phantom pair")
        if not 0 <= self.p <= 2:
            raise ConfigError(f"p: must be 0, 1 or 2, got {self.p}")
        if self.r < 1:
            raise ConfigError(f"r: must be >= 1, got {self.r}")
        if self.derivative_source not in ("exact", "divided_difference"):
            raise ConfigError(f"source: must be 'exact' or 'divided_difference', got {self.derivative_source!r}")
        if self.derivative_source == "exact" and self.function_id is None:
            raise ConfigError("source: exact derivatives need --function")
        if self.phantom_values is not None and len(self.phantom_values) != 2 * self.k:
            raise ConfigError(
                f"phantom-values: expected {2 * self.k} values for k = {self.k}, got {len(self.phantom_values)}"
            )
        fmt = self.resolved_format
        allowed = {"interpolate": ("json", "csv"), "table": FORMATS, "optimize": ("json",), "plot": ("csv",)}
        if fmt not in allowed[self.command]:
            raise ConfigError(f"format: '{self.command}' supports {', '.join(allowed[self.command])}, not {fmt!r}")
        if self.dense < 101:
            raise ConfigError(f"dense: must be >= 101, got {self.dense}")
        if not self.resolution > 0:
            raise ConfigError(f"resolution: must be positive, got {self.resolution}")
        if self.normalize not in ("sup", "range"):
            raise ConfigError(f"normalize: must be 'sup' or 'range', got {self.normalize!r}")

    @property
    def resolved_format(self) -> str:
        return self.format or _DEFAULT_FORMAT.get(self.command, "json")


def _load(config: RunConfig):
    if config.input_path is not None:
        y = read_samples_csv(config.input_path)
        if config.n is not None and config.n != y.size:
            raise ConfigError(f"n: --n {config.n} does not match {y.size} values in {config.input_path}")
        return None, y
    f = get_source(config.function_id, config.n)
    return f, sample_source(f, config.n)


def _complete(config: RunConfig, f, y):
    samples = place_on_circle(y, config.k)
    if config.k == 0:
        return samples
    if config.phantom_values is not None:
        cfg = PhantomConfig(config.k, config.p, "explicit_values", tuple(config.phantom_values))
    else:
        cfg = PhantomConfig(config.k, config.p, config.derivative_source)
    return fill_phantom(samples, cfg, f)


def _interpolate(config: RunConfig) -> str:
    f, y = _load(config)
    samples = _complete(config, f, y)
    spline = build_spline(samples, config.r)
    nodes = samples.grid.nodes()
    residuals = np.abs(spline(nodes) - samples.values)
    t = np.linspace(0.0, 2.0 * np.pi, config.dense)
    values = spline(t)
    if config.resolved_format == "csv":
        comments = [
            f"N={samples.original_count} k={config.k} p={config.p} r={config.r} M={samples.grid.node_count}",
            f"max_node_residual={_io.fmt(residuals.max())}",
        ]
        return _io.csv_text(["t", "spline"], ([float(a), float(b)] for a, b in zip(t, values)), comments)
    doc = {
        "N": samples.original_count,
        "k": config.k,
        "p": config.p if config.phantom_values is None else None,
        "r": config.r,
        "node_count": samples.grid.node_count,
        "derivative_source": "explicit_values" if config.phantom_values is not None else config.derivative_source,
        "samples": samples.values,
        "nodes": nodes,
        "node_residuals": residuals,
        "max_node_residual": float(residuals.max()),
        "truncation_depth": spline.truncation_depth,
        "curve": {"t": t, "spline": values},
    }
    if f is not None:
        doc["function"] = f.id
        doc["relative_error"] = relative_error(spline, f, samples.original_count, config.dense, normalize=config.normalize)
    return _io.json_text(doc)


def _table(config: RunConfig) -> str:
    f = get_source(config.function_id, config.n)
    reports = run_table(
        f, config.n, config.k_values, config.r,
        source=config.derivative_source, dense=config.dense, normalize=config.normalize,
    )
    fmt = config.resolved_format
    if fmt == "markdown":
        return render_markdown(reports, f"{f.id}: {f.description}, r = {config.r}")
    if fmt == "csv":
        return render_csv(reports)
    return _io.json_text([rep.to_json() for rep in reports])


def _optimize(config: RunConfig) -> str:
    f = get_source(config.function_id, config.n)
    _, base = build_variant(f, config.n, 0, r=config.r)
    baseline = relative_error(base, f, config.n, config.dense, normalize=config.normalize)
    _, spec = default_search(
        f, config.n, config.k, config.r,
        resolution=config.resolution, coarsest=config.coarsest, max_sweeps=config.max_sweeps,
        dense=config.dense, normalize=config.normalize, start_order=config.p,
    )
    result = optimize_phantom(spec)
    doc = {
        "function": f.id,
        "N": config.n,
        "k": config.k,
        "r": config.r,
        "resolution": config.resolution,
        "initial_values": list(spec.initial),
        "initial_error": result.initial_error,
        "best_values": result.best_values,
        "best_error": result.best_error,
        "baseline_error": baseline,
        "reduction_factor": baseline / result.best_error if result.best_error > 0 else None,
        "evaluations": result.evaluations,
        "converged": result.converged,
    }
    return _io.json_text(doc)


def _plot(config: RunConfig) -> str:
    f, y = _load(config)
    samples = _complete(config, f, y)
    spline = build_spline(samples, config.r)
    curve = emit_curve(spline, f, samples.original_count, config.dense)
    comments = [
        f"function={f.id} N={samples.original_count} k={config.k} p={config.p} r={config.r}",
        f"data_arc_end={_io.fmt(samples.data_arc[1])}",
    ]
    return curve_csv(curve, comments)


_HANDLERS = {"interpolate": _interpolate, "table": _table, "optimize": _optimize, "plot": _plot}


def render(config: RunConfig) -> str:
    """Validate ``config`` and return the command's output text."""
    config.validate()
    return _HANDLERS[config.command](config)


def run(config: RunConfig) -> int:
    """Execute ``config``; writes the artifact and returns the exit status."""
    try:
        text = render(config)
        if config.output:
            _io.atomic_write_text(config.output, text)
        else:
            sys.stdout.write(text)
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


def _floats(text: str | None) -> tuple[float, ...] | None:
    if text is None:
        return None
    try:
        return tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise click.BadParameter(f"cannot parse {text!r} as numbers", param_hint="--phantom-values") from None


def _source_options(fn):
    fn = click.option("--function", "function_id", type=click.Choice(BUILTIN_FUNCTIONS), help="Builtin source function.")(fn)
    fn = click.option("--n", type=int, help="Number of original samples.")(fn)
    fn = click.option("--r", type=int, default=3, show_default=True, help="Spline order.")(fn)
    fn = click.option(
        "--source", "derivative_source", type=click.Choice(DERIVATIVE_SOURCES[:2]),
        default="divided_difference", show_default=True, help="Boundary derivative source.",
    )(fn)
    fn = click.option("--dense", type=int, default=DEFAULT_DENSE, show_default=True, help="Error/curve grid size.")(fn)
    fn = click.option("--normalize", type=click.Choice(["sup", "range"]), default="sup", show_default=True)(fn)
    fn = click.option("-o", "--output", type=click.Path(dir_okay=False), help="Output file (default: stdout).")(fn)
    return fn


def _finish(**kwargs):
    status = run(RunConfig(**kwargs))
    if status:
        sys.exit(status)


@click.group()
def cli():
    """Trigonometric spline interpolation with phantom nodes."""


@cli.command()
@_source_options
@click.option("--input", "input_path", type=click.Path(dir_okay=False), help="CSV of samples, one per line.")
@click.option("--k", type=int, default=1, show_default=True, help="Phantom node pairs.")
@click.option("--p", type=int, default=2, show_default=True, help="Matched derivative order.")
@click.option("--phantom-values", help="Explicit phantom values, comma separated.")
@click.option("--format", "format", type=click.Choice(["json", "csv"]), default=None)
def interpolate(phantom_values, **kwargs):
    """Build the spline and write its curve and node residuals."""
    _finish(command="interpolate", phantom_values=_floats(phantom_values), **kwargs)


@cli.command()
@_source_options
@click.option("--k", "k_values", type=int, multiple=True, default=(1, 2), show_default=True, help="Phantom pairs (repeatable).")
@click.option("--format", "format", type=click.Choice(FORMATS), default=None)
def table(k_values, **kwargs):
    """Baseline error and reduction factors for p = 0, 1, 2."""
    _finish(command="table", k_values=tuple(k_values), **kwargs)


@cli.command()
@_source_options
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--p", type=int, default=2, show_default=True, help="Match order of the starting phantom values.")
@click.option("--resolution", type=float, default=0.01, show_default=True)
@click.option("--coarsest", type=float, default=1.0, show_default=True, help="Coarsest lattice step (0 for single level).")
@click.option("--max-sweeps", type=int, default=200, show_default=True)
def optimize(coarsest, **kwargs):
    """Search phantom values that minimise the relative error."""
    _finish(command="optimize", coarsest=coarsest or None, **kwargs)


@cli.command()
@_source_options
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--p", type=int, default=2, show_default=True)
@click.option("--phantom-values", help="Explicit phantom values, comma separated.")
def plot(phantom_values, **kwargs):
    """Curve data t, S(t), f(t), |S - f| over [0, 2 pi]."""
    _finish(command="plot", phantom_values=_floats(phantom_values), **kwargs)


def main(argv=None):
    return cli.main(args=argv, prog_name="phantomspline")


if __name__ == "__main__":
    main()
