"""Command-line entry points: generate | run | homology | report."""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from .estimator import CoveringNerve
from .exceptions import PipelineError, SpaceValidationError
from .formats import read_metadata, read_space, write_metadata, write_space
from .homology import FieldSpec, betti
from .nerve import DEFAULT_MULTIPLICITY_CAP, read_complex, write_complex
from .space import circle_space, disjoint_union, flat_torus_space, sphere2_space

EXIT_OK, EXIT_VALIDATION, EXIT_CHECK, EXIT_RESOURCE = 0, 2, 3, 4

RUN_DEFAULTS = {
    "R0": "cover-safe",
    "theta": "paper",
    "beta": None,
    "field": 2,
    "dmax": None,
    "multiplicity_cap": DEFAULT_MULTIPLICITY_CAP,
    "jobs": 1,
    "copies": 1,
    "sep": None,
}


def parse_generator(spec: str):
    """``circle:M``, ``sphere2:M`` or ``flat-torus:A,B,M1,M2``."""
    name, _, args = spec.partition(":")
    vals = [v for v in args.split(",") if v]
    try:
        if name == "circle" and len(vals) == 1:
            return circle_space(int(vals[0]))
        if name == "sphere2" and len(vals) == 1:
            return sphere2_space(int(vals[0]))
        if name == "flat-torus" and len(vals) == 4:
            a, b, m1, m2 = vals
            return flat_torus_space(float(a), float(b), int(m1), int(m2))
    except ValueError as exc:
        raise click.BadParameter(f"{spec}: {exc}") from None
    raise click.BadParameter(
        f"unknown generator spec {spec!r}; use circle:M, sphere2:M or flat-torus:A,B,M1,M2"
    )


def _replicate(space, copies, sep):
    if copies < 1:
        raise click.BadParameter("--copies must be at least 1")
    if copies == 1:
        return space
    try:
        return disjoint_union([space] * copies, sep)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def _fail(exc: PipelineError):
    click.echo(f"error [{exc.stage}]: {exc}", err=True)
    sys.exit(exc.exit_code)


@click.group()
def main():
    """Covering-trick nerve complexes and Betti-number volume bounds."""


@main.command()
@click.argument("name", type=click.Choice(["circle", "sphere2", "flat-torus", "union"]))
@click.option("--m", "m", type=int, help="point count (circle, sphere2)")
@click.option("--a", type=float, default=1.0, show_default=True)
@click.option("--b", type=float, default=1.0, show_default=True)
@click.option("--m1", type=int, default=40, show_default=True)
@click.option("--m2", type=int, default=40, show_default=True)
@click.option("--of", "of", help="component generator spec for union, e.g. sphere2:500")
@click.option("--copies", type=int, default=2, show_default=True, help="union component count")
@click.option("--sep", type=float, help="union separation (default 10 x diameter + 1)")
@click.option("-o", "--out", type=click.Path(dir_okay=False), help="output space file")
@click.option("--binary", is_flag=True, help="write the EMB1 binary layout")
def generate(name, m, a, b, m1, m2, of, copies, sep, out, binary):
    """Write a ground-truth space file and its .meta sidecar."""
    if name in ("circle", "sphere2"):
        if m is None:
            raise click.BadParameter("--m is required", param_hint="--m")
        space = parse_generator(f"{name}:{m}")
    elif name == "flat-torus":
        space = parse_generator(f"flat-torus:{a},{b},{m1},{m2}")
    else:
        if not of:
            raise click.BadParameter("--of is required for union", param_hint="--of")
        space = _replicate(parse_generator(of), copies, sep)
    out = Path(out or f"{name}.space")
    write_space(space, out, binary=binary)
    meta = out.with_suffix(".meta")
    write_metadata(space, meta)
    click.echo(
        f"wrote {out} (m={space.point_count}, n={space.dim}, inj={space.inj:.17g}, "
        f"vol={space.volume:.17g}, betti={list(space.betti)}) and {meta}"
    )


def _load_config(path):
    if path is None:
        return {}
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as fh:
        return {k.replace("-", "_"): v for k, v in tomllib.load(fh).items()}


@main.command()
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), help="space file")
@click.option("--gen", help="generator spec instead of a file, e.g. sphere2:2000")
@click.option("--copies", type=int, help="disjoint copies of the --gen space [1]")
@click.option("--sep", type=float, help="separation between copies")
@click.option("--truth", type=click.Path(exists=True, dir_okay=False), help="metadata with ground-truth Betti numbers")
@click.option("--R0", "R0", help="cover-safe (0.24 inj, default), quarter-inj, half-inj, or a radius")
@click.option("--theta", help="paper (default) or a number")
@click.option("--beta", type=float, help="local volume constant (default: estimated)")
@click.option("--field", type=int, help="prime field characteristic [2]")
@click.option("--dmax", type=int, help="top nerve dimension [dim + 1]")
@click.option("--multiplicity-cap", type=int, help=f"witness-set cap [{DEFAULT_MULTIPLICITY_CAP}]")
@click.option("--jobs", type=int, help="parallelism degree [1]")
@click.option("--out", type=click.Path(dir_okay=False), help="report path (default: timestamped)")
@click.option("--complex-out", type=click.Path(dir_okay=False), help="nerve complex path")
@click.option("--config", type=click.Path(exists=True, dir_okay=False), help="TOML config; flags override")
def run(in_path, gen, copies, sep, truth, R0, theta, beta, field, dmax, multiplicity_cap,
        jobs, out, complex_out, config):
    """Run the full pipeline and write the bound report plus the nerve complex."""
    flags = dict(
        in_path=in_path, gen=gen, copies=copies, sep=sep, truth=truth, R0=R0, theta=theta,
        beta=beta, field=field, dmax=dmax, multiplicity_cap=multiplicity_cap, jobs=jobs,
        out=out, complex_out=complex_out,
    )
    cfg = dict(RUN_DEFAULTS)
    file_cfg = _load_config(config)
    if "in" in file_cfg:
        file_cfg["in_path"] = file_cfg.pop("in")
    cfg.update(file_cfg)
    cfg.update({k: v for k, v in flags.items() if v is not None})

    if bool(cfg.get("in_path")) == bool(cfg.get("gen")):
        raise click.UsageError("give exactly one of --in or --gen")
    if cfg["field"] is not None:
        try:
            FieldSpec(int(cfg["field"]))
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--field") from None

    try:
        if cfg.get("gen"):
            space = _replicate(parse_generator(cfg["gen"]), int(cfg["copies"]), cfg["sep"])
        else:
            space = read_space(cfg["in_path"])
        truth_seq = None
        if cfg.get("truth"):
            truth_seq = read_metadata(cfg["truth"]).get("betti")
        est = CoveringNerve(
            R0=cfg["R0"], theta=cfg["theta"], beta=cfg["beta"], field=int(cfg["field"]),
            dmax=cfg["dmax"], multiplicity_cap=int(cfg["multiplicity_cap"]),
            n_jobs=int(cfg["jobs"]),
        )
        est.fit(space, truth=truth_seq)
    except PipelineError as exc:
        _fail(exc)
    except ValueError as exc:
        _fail(SpaceValidationError(str(exc)))

    report = est.report_
    out = Path(cfg.get("out") or time.strftime("report-%Y%m%dT%H%M%S.json"))
    out.write_text(report.to_json(), encoding="utf-8")
    cx_path = Path(cfg.get("complex_out") or out.with_suffix(".complex"))
    write_complex(est.complex_, cx_path)
    click.echo(
        f"N={report.N} T={report.T} t={report.t} b={report.b} "
        f"mandatory_ok={report.mandatory_ok} -> {out}, {cx_path}"
    )
    if not report.mandatory_ok:
        click.echo("error [checks]: mandatory checks failed; see report", err=True)
        sys.exit(EXIT_CHECK)


@main.command()
@click.argument("complex_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--field", type=int, default=2, show_default=True)
def homology(complex_file, field):
    """Print b_0 .. b_dmax of a complex file."""
    try:
        spec = FieldSpec(field)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--field") from None
    try:
        cx = read_complex(complex_file)
    except PipelineError as exc:
        _fail(exc)
    click.echo(" ".join(map(str, betti(cx, spec).b)))


@main.command()
@click.argument("report_file", type=click.Path(exists=True, dir_okay=False))
def report(report_file):
    """Pretty-print a report file."""
    with open(report_file, encoding="utf-8") as fh:
        data = json.load(fh)
    width = max(map(len, data))
    for key, value in data.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        click.echo(f"{key:<{width}}  {value}")


if __name__ == "__main__":
    main()
