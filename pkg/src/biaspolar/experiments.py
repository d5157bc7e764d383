"""Single runs and batch grids written to trace CSV / summary JSON files."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis
from .core import Discretization, ExperimentConfig, Trace, ValidationError, ensure_valid
from .dynamics import evolve
from .scenarios import GraphFileError, load_graph, make_beliefs, make_graph

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4

CONFIG_KEYS = (
    "n", "belief_kind", "graph_kind", "graph_file", "update_rule", "t_max",
    "epsilon", "bins", "K", "alpha", "record_every", "out_dir",
)
SHARED_BATCH_KEYS = ("n", "update_rule", "t_max", "epsilon", "bins", "K", "alpha", "record_every")


class ConfigError(ValueError):
    """Malformed configuration (exit code 2)."""


def _typed(data: dict, key: str, types, what: str):
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, types):
        raise ConfigError(f"{key!r} must be {what}, got {value!r}")
    return value


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build a config from parsed JSON.

    Raises :class:`ConfigError` for unknown keys or wrong types and
    :class:`ValidationError` for out-of-range values.
    """
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    kwargs = {}
    for key, types, what in (
        ("n", int, "an integer"),
        ("graph_kind", str, "a string"),
        ("update_rule", str, "a string"),
        ("t_max", int, "an integer"),
        ("epsilon", (int, float), "a number"),
        ("K", (int, float), "a number"),
        ("alpha", (int, float), "a number"),
        ("record_every", int, "an integer"),
        ("out_dir", str, "a string"),
    ):
        if key in data:
            kwargs[key] = _typed(data, key, types, what)
    for key in ("epsilon", "K", "alpha"):
        if key in kwargs:
            kwargs[key] = float(kwargs[key])
    if data.get("graph_file") is not None:
        kwargs["graph_file"] = _typed(data, "graph_file", str, "a string")
        kwargs.setdefault("graph_kind", "file")
    if "belief_kind" in data:
        kind = data["belief_kind"]
        if isinstance(kind, list):
            if not kind or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in kind):
                raise ConfigError("explicit belief_kind must be a non-empty list of numbers")
            kwargs.setdefault("n", len(kind))
        elif not isinstance(kind, str):
            raise ConfigError(f"'belief_kind' must be a name or a list, got {kind!r}")
        kwargs["belief_kind"] = kind
    if "bins" in data:
        try:
            kwargs["bins"] = Discretization.from_json(data["bins"])
        except ValueError as exc:
            raise ValidationError([f"bins: {exc}"]) from None
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(data)


@dataclass
class RunResult:
    config: ExperimentConfig
    trace: Trace
    summary: dict = field(default_factory=dict)


def build_scenario(config: ExperimentConfig):
    """Materialise the graph and initial beliefs, raising ValidationError on bad inputs."""
    try:
        if config.graph_kind == "file":
            graph = load_graph(config.graph_file)
        else:
            graph = make_graph(config.graph_kind, config.n)
        beliefs = make_beliefs(config.belief_kind, config.n)
    except GraphFileError as exc:
        raise ValidationError([f"graph file: {exc}"]) from None
    except ValueError as exc:
        raise ValidationError([str(exc)]) from None
    ensure_valid(graph, beliefs)
    return graph, beliefs


def simulate(config: ExperimentConfig) -> RunResult:
    graph, beliefs = build_scenario(config)
    trace = evolve(
        beliefs, graph, config.update_rule, config.t_max, config.bins,
        config.K, config.alpha, config.record_every,
    )
    convergence = analysis.convergence_report(trace, config.epsilon)
    diagnosis = analysis.diagnose_persistence(graph, beliefs, trace, config.bins, config.epsilon)
    predicted = analysis.predict_consensus(graph, beliefs, config.update_rule)
    final = trace.final
    summary = {
        "config": config.to_json(),
        "structure": analysis.structure_report(graph).to_json(),
        "convergence": convergence.to_json(),
        "diagnosis": diagnosis.to_json(),
        "predicted_consensus": predicted,
        "observed_consensus": convergence.consensus_value,
        "observed_mean": math.fsum(final) / final.size,
        "polarization_initial": float(trace.polarization[0]),
        "polarization_final": float(trace.polarization[-1]),
        "steps_recorded": len(trace),
    }
    return RunResult(config, trace, summary)


def format_trace_csv(trace: Trace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    n = trace.configs.shape[1]
    writer.writerow(["t", *(f"b_{i}" for i in range(n)), "rho"])
    for t, row, rho in zip(trace.steps, trace.configs, trace.polarization):
        writer.writerow([int(t), *(repr(float(x)) for x in row), repr(float(rho))])
    return buf.getvalue()


def read_trace_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(steps, configs, rho)`` from a trace CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    body = rows[1:]
    steps = np.array([int(r[0]) for r in body], dtype=np.int64)
    configs = np.array([[float(x) for x in r[1:-1]] for r in body])
    rho = np.array([float(r[-1]) for r in body])
    return steps, configs, rho


def format_summary(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_run(result: RunResult, out_dir, plot: bool = False) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trace.csv").write_text(format_trace_csv(result.trace), encoding="utf-8")
    (out / "summary.json").write_text(format_summary(result.summary), encoding="utf-8")
    if plot:
        from .plotting import plot_trace

        plot_trace(result.trace, out / "trace.svg")


def run_single(config: ExperimentConfig, out_dir=None, plot: bool = False) -> int:
    """Simulate one config and write its files; returns a process exit code."""
    out_dir = out_dir or config.out_dir
    try:
        result = simulate(config)
    except ValidationError as exc:
        log.error("validation failed: %s", exc)
        return EXIT_VALIDATION
    except OSError as exc:
        log.error("cannot read input: %s", exc)
        return EXIT_IO
    try:
        write_run(result, out_dir, plot)
    except OSError as exc:
        log.error("cannot write output: %s", exc)
        return EXIT_IO
    return EXIT_OK


@dataclass(frozen=True)
class BatchSpec:
    belief_kinds: tuple
    graph_kinds: tuple[str, ...]
    shared: dict
    out_dir: str
    workers: int = 1

    def __post_init__(self):
        if not self.belief_kinds or not self.graph_kinds:
            raise ConfigError("batch axes 'belief_kinds' and 'graph_kinds' must be non-empty")
        if self.workers < 1:
            raise ConfigError("'workers' must be >= 1")

    def cells(self):
        """Grid cells in row-major order: one row per graph kind."""
        labels = [k if isinstance(k, str) else f"explicit{i}" for i, k in enumerate(self.belief_kinds)]
        for graph_kind, (label, belief_kind) in itertools.product(self.graph_kinds, zip(labels, self.belief_kinds)):
            name = f"{graph_kind}__{label}"
            data = dict(self.shared, belief_kind=belief_kind, graph_kind=graph_kind,
                        out_dir=str(Path(self.out_dir) / name))
            yield name, data


def batch_from_dict(data: dict) -> BatchSpec:
    if not isinstance(data, dict):
        raise ConfigError("batch spec must be a JSON object")
    allowed = set(SHARED_BATCH_KEYS) | {"belief_kinds", "graph_kinds", "out_dir", "workers"}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown batch keys: {unknown}")
    for key in ("belief_kinds", "graph_kinds"):
        if not isinstance(data.get(key), list):
            raise ConfigError(f"{key!r} must be a list")
    workers = data.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int):
        raise ConfigError("'workers' must be an integer")
    return BatchSpec(
        belief_kinds=tuple(tuple(k) if isinstance(k, list) else k for k in data["belief_kinds"]),
        graph_kinds=tuple(data["graph_kinds"]),
        shared={k: data[k] for k in SHARED_BATCH_KEYS if k in data},
        out_dir=str(data.get("out_dir", "batch_out")),
        workers=workers,
    )


def load_batch(path) -> BatchSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return batch_from_dict(data)


def _run_cell(data: dict):
    data = {k: list(v) if isinstance(v, tuple) else v for k, v in data.items()}
    try:
        config = config_from_dict(data)
    except ConfigError as exc:
        return EXIT_PARSE, str(exc), None
    except ValidationError as exc:
        return EXIT_VALIDATION, str(exc), None
    try:
        result = simulate(config)
    except ValidationError as exc:
        return EXIT_VALIDATION, str(exc), None
    except OSError as exc:
        return EXIT_IO, str(exc), None
    try:
        write_run(result, config.out_dir)
    except OSError as exc:
        return EXIT_IO, str(exc), None
    return EXIT_OK, None, (result.trace.steps, result.trace.polarization)


def run_batch(spec: BatchSpec, plot: bool = False) -> int:
    """Run every grid cell, then write ``index.json``; nonzero if any cell failed."""
    cells = list(spec.cells())
    try:
        Path(spec.out_dir).mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        log.error("cannot create output directory: %s", exc)
        return EXIT_IO
    payloads = [data for _, data in cells]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            outcomes = list(pool.map(_run_cell, payloads))
    else:
        outcomes = [_run_cell(p) for p in payloads]

    index = {"belief_kinds": [k if isinstance(k, str) else list(k) for k in spec.belief_kinds],
             "graph_kinds": list(spec.graph_kinds), "cells": []}
    series = {}
    for (name, data), (code, error, curve) in zip(cells, outcomes):
        entry = {
            "name": name,
            "graph_kind": data["graph_kind"],
            "belief_kind": data["belief_kind"] if isinstance(data["belief_kind"], str) else list(data["belief_kind"]),
            "exit_code": code,
            "trace": f"{name}/trace.csv" if code == EXIT_OK else None,
            "summary": f"{name}/summary.json" if code == EXIT_OK else None,
        }
        if error:
            entry["error"] = error
            log.error("cell %s failed: %s", name, error)
        index["cells"].append(entry)
        if curve is not None:
            series[(data["graph_kind"], data["belief_kind"])] = curve
    try:
        (Path(spec.out_dir) / "index.json").write_text(format_summary(index), encoding="utf-8")
        if plot and series:
            from .plotting import plot_batch_grid

            plot_batch_grid(series, spec.graph_kinds, spec.belief_kinds, Path(spec.out_dir) / "polarization_grid.svg")
    except OSError as exc:
        log.error("cannot write batch index: %s", exc)
        return EXIT_IO
    codes = [code for code, _, _ in outcomes]
    return next((c for c in codes if c != EXIT_OK), EXIT_OK)
