"""Command-line front end.

    dok params --h 0.1 --h 1/20 --format json
    dok kernel --h 0.1 --radius 5 --format csv
    dok symbol --h 0.1 --grid 16 --terms 1000
    dok check  --h 0.2 --h 0.1 --h 0.05

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys

import click
import numpy as np

from .errors import DokError, InvalidStepSize, PoleProximity
from .kernel import eval_D, eval_G_discrete
from .params import StepSize, compute_params
from .spectral import symbol_closed_values, symbol_series
from .verify import SuiteConfig, run_suite

SCHEMA_VERSION = 1


class StepParam(click.ParamType):
    name = "step"

    def convert(self, value, param, ctx):
        if isinstance(value, StepSize):
            return value
        try:
            step = StepSize.parse(value)
        except InvalidStepSize as exc:
            self.fail(f"invalid step {value!r}: {exc}", param, ctx)
        if not step.nominal:
            self.fail(f"invalid step {value!r}: must lie in (0, 1]", param, ctx)
        return step


STEP = StepParam()


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(command: str, header: list[str], rows: list[dict], fmt: str, output, extra: dict | None = None):
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "records": rows}
        if extra:
            doc.update(extra)
        text = json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(row.get(col)) for col in header])
        text = buf.getvalue()
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _common(func):
    func = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                        help="Write to this file instead of stdout.")(func)
    func = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)(func)
    func = click.option("--h", "steps", type=STEP, multiple=True, required=True,
                        help="Lattice step, decimal or 1/N; repeatable.")(func)
    return func


@click.group()
def cli():
    """Discrete analogue of d^4/dx^4 + 2 d^2/dx^2 + 1 on the lattice h*Z."""


@cli.command()
@_common
def params(steps, fmt, output):
    """Constants lambda1, lambda2, A1, B1, K, c for each step."""
    rows = [compute_params(s).as_dict() for s in steps]
    _emit("params", ["h", "lambda1", "lambda2", "A1", "B1", "K", "c", "branch"], rows, fmt, output)


@cli.command()
@_common
@click.option("--radius", type=int, default=10, show_default=True)
def kernel(steps, fmt, output, radius):
    """Samples of D[beta] and G[beta] on [-radius, radius]."""
    if radius < 2:
        raise click.BadParameter(f"radius must be at least 2, got {radius}", param_hint="--radius")
    rows = []
    for s in steps:
        p = compute_params(s)
        for beta in range(-radius, radius + 1):
            rows.append({"h": s.label, "beta": beta, "D": eval_D(p, beta), "G": eval_G_discrete(s, beta)})
    _emit("kernel", ["h", "beta", "D", "G"], rows, fmt, output)


@cli.command()
@_common
@click.option("--grid", type=int, default=16, show_default=True, help="Equispaced points over one period.")
@click.option("--terms", type=int, default=100_000, show_default=True, help="Half-width of the pole series.")
def symbol(steps, fmt, output, grid, terms):
    """Closed-form symbol on a frequency grid, with the series discrepancy."""
    if grid < 2:
        raise click.BadParameter(f"grid must be at least 2, got {grid}", param_hint="--grid")
    if terms < 1:
        raise click.BadParameter(f"terms must be at least 1, got {terms}", param_hint="--terms")
    rows = []
    for s in steps:
        prm = compute_params(s)
        ps = np.arange(grid) / (grid * s.h)
        closed = symbol_closed_values(prm, ps)
        for p, value in zip(ps.tolist(), closed.tolist()):
            try:
                series = symbol_series(s, p, terms)
                residual = abs(series - value) / abs(value) if value != 0 else abs(series)
            except PoleProximity:
                residual = None
            rows.append({"h": s.label, "p": p, "re": value.real, "im": value.imag, "series_residual": residual})
    _emit("symbol", ["h", "p", "re", "im", "series_residual"], rows, fmt, output)


@cli.command()
@_common
@click.option("--tol", type=float, default=None, help="Absolute tolerance of the delta check.")
@click.option("--annihilation-rel", type=float, default=None, help="Annihilation tolerance as a multiple of K.")
@click.option("--spectral-rel", type=float, default=None, help="Relative tolerance of the Fourier-coefficient oracle.")
@click.option("--window", type=int, default=None, help="Half-width of the delta window.")
def check(steps, fmt, output, tol, annihilation_rel, spectral_rel, window):
    """Run the verification suite; exit 1 if any check misbehaves."""
    overrides = {}
    if tol is not None:
        overrides["delta_tol"] = tol
    if annihilation_rel is not None:
        overrides["annihilation_rel"] = annihilation_rel
    if spectral_rel is not None:
        overrides["spectral_rel"] = spectral_rel
    if window is not None:
        if window < 5:
            raise click.BadParameter(f"window must be at least 5, got {window}", param_hint="--window")
        overrides["delta_window"] = window
    for key, value in overrides.items():
        if isinstance(value, float) and not value > 0.0:
            raise click.BadParameter(f"{key} must be positive, got {value!r}")
    reports = run_suite(list(steps), SuiteConfig(**overrides))
    # step labels, not floats, so output echoes the caller's spelling
    labels = [s.label for s in steps for _ in range(len(reports) // len(steps))]
    rows = []
    for label, report in zip(labels, reports):
        row = report.as_dict()
        row["h"] = label
        rows.append(row)
    ok = all(r.as_expected for r in reports)
    header = ["h", "name", "tolerance", "max_residual", "radius_used", "expect_pass", "passed", "as_expected", "reason"]
    _emit("check", header, rows, fmt, output, extra={"ok": ok})
    if not ok:
        for label, report in zip(labels, reports):
            if not report.as_expected:
                detail = report.reason or f"max residual {report.max_residual!r} vs tolerance {report.tolerance!r}"
                click.echo(f"FAIL h={label} {report.name}: {detail}", err=True)
        sys.exit(1)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="dok", standalone_mode=True)
    except DokError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
