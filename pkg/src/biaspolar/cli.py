"""Command line entry point: ``biaspolar simulate|batch|gen|analyze``."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import analysis
from .core import ValidationError, validate
from .experiments import (
    EXIT_IO,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_VALIDATION,
    ConfigError,
    load_batch,
    load_config,
    run_batch,
    run_single,
)
from .scenarios import BELIEF_KINDS, GRAPH_KINDS, GraphFileError, format_graph, load_graph, make_beliefs, make_graph


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_or_fail(loader, path):
    try:
        return loader(path)
    except ConfigError as exc:
        _fail(EXIT_PARSE, str(exc))
    except ValidationError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose):
    """Confirmation-bias belief dynamics and Esteban-Ray polarization."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False), help="Experiment config JSON.")
@click.option("--out", "out_dir", default=None, help="Override the config's out_dir.")
@click.option("--plot", is_flag=True, help="Also write trace.svg.")
def simulate(config_path, out_dir, plot):
    """Run one experiment and write trace.csv and summary.json."""
    config = _read_or_fail(load_config, config_path)
    code = run_single(config, out_dir, plot=plot)
    if code == EXIT_OK:
        click.echo(str(Path(out_dir or config.out_dir) / "summary.json"))
    sys.exit(code)


@main.command()
@click.option("--spec", "spec_path", required=True, type=click.Path(dir_okay=False), help="Batch spec JSON.")
@click.option("--plot", is_flag=True, help="Also write polarization_grid.svg.")
def batch(spec_path, plot):
    """Run every belief-kind x graph-kind cell of a grid."""
    spec = _read_or_fail(load_batch, spec_path)
    code = run_batch(spec, plot=plot)
    click.echo(str(Path(spec.out_dir) / "index.json"))
    sys.exit(code)


@main.command()
@click.argument("what", type=click.Choice(["graph", "beliefs"]))
@click.option("--kind", required=True)
@click.option("--n", "n", required=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def gen(what, kind, n, out_path):
    """Write a generated graph edge list or beliefs CSV."""
    try:
        if what == "graph":
            text = format_graph(make_graph(kind, n))
        else:
            text = "\n".join(repr(float(b)) for b in make_beliefs(kind, n).beliefs) + "\n"
    except ValueError as exc:
        known = GRAPH_KINDS if what == "graph" else BELIEF_KINDS
        _fail(EXIT_VALIDATION, f"{exc} (known kinds: {', '.join(known)})")
    try:
        Path(out_path).write_text(text, encoding="utf-8")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(dir_okay=False))
def analyze(graph_path):
    """Print the structure report of a graph file as JSON."""
    try:
        graph = load_graph(graph_path)
    except GraphFileError as exc:
        _fail(EXIT_PARSE, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    check = validate(graph)
    if not check.ok:
        _fail(EXIT_VALIDATION, "; ".join(check.errors))
    click.echo(json.dumps(analysis.structure_report(graph).to_json(), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
