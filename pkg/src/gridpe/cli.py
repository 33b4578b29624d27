"""Command-line interface.

Thin client over the ops layer: commands parse flags and files, call one
operation, and write CSV, JSON, or PGM through the formats module, so a
fixed invocation always produces byte-identical output.

Exit codes: 0 success, 1 validation or usage error, 2 failed verification.
"""

from __future__ import annotations

import json

import click
import pydantic

from . import __version__, ops
from .attention import METHODS
from .errors import ValidationError
from .formats import (
    csv_text,
    json_text,
    read_positions_csv,
    write_csv,
    write_json,
    write_pgm,
)
from .models import BankConfigModel, VcoParamsModel, VerifyReportModel


def _load_json_file(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None


def _parse_model(model_cls, payload, label: str):
    try:
        return model_cls.model_validate(payload)
    except pydantic.ValidationError as exc:
        raise ValidationError(f"{label}: {exc}") from None


def _parse_floats(text: str, label: str, count: int | None = None) -> list[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValidationError(
            f"{label} must be comma-separated numbers, got {text!r}") from None
    if count is not None and len(values) != count:
        raise ValidationError(f"{label} needs {count} numbers, got {len(values)}")
    return values


def _emit_csv(header, rows, out: str | None) -> None:
    if out is None:
        click.echo(csv_text(header, rows), nl=False)
    else:
        write_csv(out, header, rows)


def _emit_payload(payload: dict, as_json: bool, out: str | None) -> None:
    if out is not None:
        write_json(out, payload)
    if as_json:
        click.echo(json_text(payload), nl=False)
    elif out is None:
        for key, value in payload.items():
            click.echo(f"{key}: {value}")


@click.group(name="gridpe")
@click.version_option(__version__)
def cli():
    """Grid-cell positional embeddings: banks, baselines, kernels, benchmarks."""


@cli.command()
@click.option("--dim", type=int, required=True, help="Spatial dimension n.")
@click.option("--mode", type=click.Choice(["fixed", "random"]), default="fixed",
              show_default=True, help="Canonical frame or a seeded rotation of it.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="CSV path; stdout when omitted.")
def simplex(dim, mode, seed, out):
    """Write the simplex direction frame for dimension DIM as CSV."""
    header, rows = ops.simplex_table(dim, mode=mode, seed=seed)
    _emit_csv(header, rows, out)
    return 0


@cli.command()
@click.option("--dim", type=int, required=True, help="Spatial dimension n.")
@click.option("--head-dim", "head_dim", type=int, required=True)
@click.option("--base", type=float, default=None,
              help="Schedule base; defaults to 10000 capped by the economy bound.")
@click.option("--json", "as_json", is_flag=True, help="Emit canonical JSON.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def scales(dim, head_dim, base, as_json, out):
    """Print the magnitude schedule with its economy-optimal bounds."""
    _emit_payload(ops.schedule_payload(dim, head_dim, base), as_json, out)
    return 0


@cli.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(dir_okay=False), help="Bank config JSON file.")
@click.option("--positions", "positions_path", required=True,
              type=click.Path(dir_okay=False), help="Position CSV, one row per point.")
@click.option("--method", type=click.Choice(list(ops.EMBED_METHODS)),
              default="gridpe", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def embed(config_path, positions_path, method, out):
    """Encode a batch of positions into feature rows under one encoder."""
    config = _parse_model(BankConfigModel, _load_json_file(config_path), config_path)
    positions = read_positions_csv(positions_path)
    features = ops.embed_features(config, positions, method=method)
    write_csv(out, ops.feature_header(features.shape[1]), features.tolist())
    return 0


@cli.command()
@click.option("--params", "params_path", required=True,
              type=click.Path(dir_okay=False), help="Oscillator parameter JSON file.")
@click.option("--extent", required=True, help="a,b,c,d for x in [a,b], y in [c,d].")
@click.option("--res", "resolution", type=int, required=True,
              help="Pixels per side.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def pattern(params_path, extent, resolution, out):
    """Render the planar interference pattern as a 16-bit PGM."""
    params = _parse_model(VcoParamsModel, _load_json_file(params_path), params_path)
    bounds = _parse_floats(extent, "--extent", count=4)
    write_pgm(out, ops.pattern_grid(params, bounds, resolution))
    return 0


@cli.command()
@click.option("--params", "params_path", required=True,
              type=click.Path(dir_okay=False), help="Oscillator parameter JSON file.")
@click.option("--dir", "direction", required=True,
              help="Comma-separated ray direction.")
@click.option("--dmax", "d_max", type=float, required=True)
@click.option("--samples", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="CSV path; stdout when omitted.")
def kernel(params_path, direction, d_max, samples, out):
    """Sample the translation-invariant kernel along a ray (CSV distance,h)."""
    params = _parse_model(VcoParamsModel, _load_json_file(params_path), params_path)
    ray = _parse_floats(direction, "--dir")
    header, rows = ops.kernel_table(params, ray, d_max, samples)
    _emit_csv(header, rows, out)
    return 0


@cli.command(name="bench-attn")
@click.option("--method", type=click.Choice(list(METHODS)), required=True)
@click.option("--dim", type=int, required=True, help="Spatial dimension n.")
@click.option("--tokens", type=int, required=True, help="Tokens per trial.")
@click.option("--trials", type=int, required=True)
@click.option("--shift-range", "shift_range", type=float, required=True,
              help="Uniform translation range per coordinate.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit canonical JSON.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def bench_attn(method, dim, tokens, trials, shift_range, seed, as_json, out):
    """Planted-argmax shift benchmark for one encoder method."""
    payload = ops.bench_payload(method, dim, tokens, trials, shift_range, seed)
    _emit_payload(payload, as_json, out)
    return 0


@cli.command()
@click.option("--dim", type=int, required=True, help="Spatial dimension n.")
@click.option("--head-dim", "head_dim", type=int, required=True)
@click.option("--json", "as_json", is_flag=True, help="Emit canonical JSON.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def verify(dim, head_dim, as_json, out):
    """Re-measure the library invariants; exit 2 if any check fails."""
    report = ops.verify_report(dim, head_dim)
    payload = VerifyReportModel.from_report(report).model_dump()
    if out is not None:
        write_json(out, payload)
    if as_json:
        click.echo(json_text(payload), nl=False)
    else:
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            click.echo(f"{status} {check.name}: measured={check.measured:.6e} "
                       f"tolerance={check.tolerance:.1e}")
        click.echo(f"overall: {'PASS' if report.overall else 'FAIL'}")
    return 0 if report.overall else 2


def main(argv=None) -> int:
    try:
        result = cli.main(args=argv, standalone_mode=False)
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    return int(result) if result is not None else 0
