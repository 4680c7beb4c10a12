"""Experiment configurations, presets, and the CSV/JSON report writer.

Each run produces a CSV file (17-significant-digit floats, fixed columns per
mode) plus a JSON metadata sidecar; with plotting enabled a rendered figure is
saved next to the CSV.  Identical configurations with the same seed produce
byte-identical CSV output, and the parallelism degree never changes a number.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__ as _version
from . import bounds as _bounds
from . import effective as _effective
from . import oracle as _oracle
from .channels import ChannelSpec, parse_channel_spec
from .exceptions import ConfigError
from .graphs import Graph, random_connected_graph, resolve_graph
from .negativity import NEGATIVE_EIG_THRESHOLD
from .partitions import Partition, parse_partition

MODES = ("exact-pauli", "bounds", "theta-scan", "oracle-check")

_PI_TOKENS = {"pi": math.pi, "pi/2": math.pi / 2.0, "pi/4": math.pi / 4.0, "pi/8": math.pi / 8.0}


def _grid_number(token: str) -> float:
    token = token.strip()
    if token in _PI_TOKENS:
        return _PI_TOKENS[token]
    try:
        return float(token)
    except ValueError:
        raise ConfigError(f"bad grid endpoint {token!r}") from None


@dataclass(frozen=True)
class GridSpec:
    """Evenly spaced grid ``start..stop`` with ``count`` points."""

    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigError(f"grid needs at least one point, got {self.count}")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid spec must be start:stop:count, got {text!r}")
        try:
            count = int(parts[2])
        except ValueError:
            raise ConfigError(f"bad grid count {parts[2]!r}") from None
        return cls(_grid_number(parts[0]), _grid_number(parts[1]), count)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def to_dict(self) -> dict:
        return {"start": self.start, "stop": self.stop, "count": self.count}

    @classmethod
    def from_dict(cls, data: dict) -> "GridSpec":
        return cls(float(data["start"]), float(data["stop"]), int(data["count"]))


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce one experiment run."""

    graph: str
    partition: str
    channel: str
    mode: str
    p_grid: GridSpec = field(default_factory=lambda: GridSpec(0.0, 1.0, 51))
    theta_grid: Optional[GridSpec] = None
    jobs: int = 1
    seed: int = 0
    out: str = "experiment.csv"
    plot: bool = False

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "partition": self.partition,
            "channel": self.channel,
            "mode": self.mode,
            "p_grid": self.p_grid.to_dict(),
            "theta_grid": self.theta_grid.to_dict() if self.theta_grid else None,
            "jobs": self.jobs,
            "seed": self.seed,
            "out": self.out,
            "plot": self.plot,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        return cls(
            graph=data["graph"],
            partition=data["partition"],
            channel=data["channel"],
            mode=data["mode"],
            p_grid=GridSpec.from_dict(data["p_grid"]),
            theta_grid=GridSpec.from_dict(data["theta_grid"]) if data.get("theta_grid") else None,
            jobs=int(data.get("jobs", 1)),
            seed=int(data.get("seed", 0)),
            out=data.get("out", "experiment.csv"),
            plot=bool(data.get("plot", False)),
        )


def presets() -> dict[str, ExperimentConfig]:
    """Named experiment bindings reproducing the library's reference figures."""
    theta33 = GridSpec(0.0, math.pi / 2.0, 33)
    return {
        "fig3": ExperimentConfig(
            graph="chain:14", partition="one-vs-rest:7", channel="depol:p",
            mode="exact-pauli", p_grid=GridSpec(0.0, 1.0, 51), out="fig3.csv",
        ),
        "fig4": ExperimentConfig(
            graph="chain:4", partition="one-vs-rest:0", channel="ad:p",
            mode="bounds", p_grid=GridSpec(0.0, 1.0, 51), out="fig4.csv",
        ),
        "fig5": ExperimentConfig(
            graph="chain:4", partition="one-vs-rest:0", channel="ad:p",
            mode="theta-scan", p_grid=GridSpec(0.1, 0.1, 1), theta_grid=theta33, out="fig5.csv",
        ),
        "fig6": ExperimentConfig(
            graph="chain:4", partition="one-vs-rest:0", channel="diffusive:p",
            mode="bounds", p_grid=GridSpec(0.0, 1.0, 51), out="fig6.csv",
        ),
        "fig7": ExperimentConfig(
            graph="chain:4", partition="one-vs-rest:0", channel="ad:p",
            mode="theta-scan", p_grid=GridSpec(0.9, 0.9, 1), theta_grid=theta33, out="fig7.csv",
        ),
    }


def format_presets_table() -> str:
    names = ["name", "mode", "graph", "partition", "channel", "p-grid", "theta-grid"]
    rows = [names]
    for name, cfg in presets().items():
        tg = cfg.theta_grid
        rows.append(
            [
                name,
                cfg.mode,
                cfg.graph,
                cfg.partition,
                cfg.channel,
                f"{cfg.p_grid.start:g}:{cfg.p_grid.stop:g}:{cfg.p_grid.count}",
                f"{tg.start:g}:{tg.stop:g}:{tg.count}" if tg else "-",
            ]
        )
    widths = [max(len(r[c]) for r in rows) for c in range(len(names))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows)


@dataclass
class RunResult:
    csv_path: Path
    meta_path: Path
    plot_path: Optional[Path]
    header: tuple[str, ...]
    rows: list[tuple]


def _resolve_graph(spec: str) -> Graph:
    try:
        return resolve_graph(spec)
    except OSError as exc:
        raise ConfigError(f"unreadable graph file {spec!r}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"bad graph spec {spec!r}: {exc}") from exc


def _resolve_partition(spec: str, n: int) -> Partition:
    try:
        return parse_partition(spec, n)
    except ValueError as exc:
        raise ConfigError(f"bad partition spec {spec!r}: {exc}") from exc


def _require_placeholder(template: ChannelSpec) -> None:
    if not template.has_placeholder:
        raise ConfigError("channel spec must contain the placeholder 'p' for the swept parameter")


def _format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[tuple]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_format_value(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _run_exact_pauli(config: ExperimentConfig, template: ChannelSpec):
    if not template.is_pauli:
        raise ConfigError("exact-pauli mode requires an all-Pauli channel")
    _require_placeholder(template)
    graph = _resolve_graph(config.graph)
    partition = _resolve_partition(config.partition, graph.n)
    rows = []
    for p in config.p_grid.values():
        channel = template.instantiate(float(p), graph.n)
        value = _effective.exact_entanglement_pauli(graph, partition, channel, jobs=config.jobs)
        rows.append((float(p), value))
    meta = {"graph_edges": list(map(list, graph.edges)), "n": graph.n, "partition_labels": list(partition.labels)}
    return ("p", "negativity"), rows, meta


def _run_bounds(config: ExperimentConfig, template: ChannelSpec):
    _require_placeholder(template)
    graph = _resolve_graph(config.graph)
    partition = _resolve_partition(config.partition, graph.n)
    rows = []
    for p in config.p_grid.values():
        channel = template.instantiate(float(p), graph.n)
        ensemble = _bounds.build_ensemble(graph, partition, channel)
        llb = _bounds.llb_of(ensemble)
        lb0 = _bounds.lb_measured_of(ensemble, 0.0)
        lbq = _bounds.lb_measured_of(ensemble, math.pi / 4.0)
        ub = _bounds.ub_of(ensemble)
        cert = _bounds.exactness_certificate(ensemble).verdict
        ref = _bounds.reference_value(graph, partition, channel)
        rows.append((float(p), llb, lb0, lbq, ub, math.nan if ref is None else ref, cert))
    meta = {
        "graph_edges": list(map(list, graph.edges)),
        "n": graph.n,
        "partition_labels": list(partition.labels),
        "theta_basis": "shared",
    }
    return ("p", "llb", "lb_theta0", "lb_thetapi4", "ub", "exact_or_oracle", "certificate"), rows, meta


def _run_theta_scan(config: ExperimentConfig, template: ChannelSpec):
    if config.theta_grid is None:
        raise ConfigError("theta-scan mode needs a theta grid")
    graph = _resolve_graph(config.graph)
    partition = _resolve_partition(config.partition, graph.n)
    if template.has_placeholder:
        if config.p_grid.count != 1:
            raise ConfigError("theta-scan expects a single-point p-grid fixing the channel strength")
        p_value = float(config.p_grid.values()[0])
    else:
        p_value = None
    channel = template.instantiate(p_value if p_value is not None else 0.0, graph.n)
    result = _bounds.theta_scan(graph, partition, channel, config.theta_grid.values())
    ref = math.nan if result.reference is None else result.reference
    rows = [(float(t), float(lb), ref) for t, lb in zip(result.thetas, result.lower_bounds)]
    meta = {
        "graph_edges": list(map(list, graph.edges)),
        "n": graph.n,
        "partition_labels": list(partition.labels),
        "p": p_value,
        "theta_basis": "shared",
    }
    return ("theta", "lb", "reference"), rows, meta


def _random_bipartition(rng: np.random.Generator, n: int) -> Partition:
    while True:
        labels = rng.integers(0, 2, size=n)
        if labels.min() == 0 and labels.max() == 1:
            return Partition(tuple(int(v) for v in labels))


def _run_oracle_check(config: ExperimentConfig, template: ChannelSpec):
    if not template.is_pauli:
        raise ConfigError("oracle-check mode requires an all-Pauli channel")
    _require_placeholder(template)
    rng = np.random.default_rng(config.seed)
    fixed_graph = None if config.graph == "random" else _resolve_graph(config.graph)
    rows = []
    cases_meta = []
    for case_id, p in enumerate(config.p_grid.values()):
        graph = fixed_graph or random_connected_graph(int(rng.integers(2, 7)), rng)
        if config.partition == "random":
            partition = _random_bipartition(rng, graph.n)
        else:
            partition = _resolve_partition(config.partition, graph.n)
        channel = template.instantiate(float(p), graph.n)
        fast = _effective.exact_entanglement_pauli(graph, partition, channel)
        slow = _oracle.oracle_negativity(graph, partition, channel)
        rows.append((case_id, fast, slow, abs(fast - slow)))
        cases_meta.append({"n": graph.n, "p": float(p), "partition": list(partition.labels)})
    return ("case_id", "fast", "oracle", "abs_diff"), rows, {"cases": cases_meta}


_MODE_RUNNERS = {
    "exact-pauli": _run_exact_pauli,
    "bounds": _run_bounds,
    "theta-scan": _run_theta_scan,
    "oracle-check": _run_oracle_check,
}


def run(config: ExperimentConfig) -> RunResult:
    """Execute one experiment and write the CSV report plus metadata sidecar."""
    if config.mode not in MODES:
        raise ConfigError(f"unknown mode {config.mode!r}; choose from {', '.join(MODES)}")
    if config.jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {config.jobs}")
    template = parse_channel_spec(config.channel)
    started = time.perf_counter()
    header, rows, extra_meta = _MODE_RUNNERS[config.mode](config, template)
    elapsed = time.perf_counter() - started

    csv_path = Path(config.out)
    if csv_path.parent and not csv_path.parent.exists():
        csv_path.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(csv_path, header, rows)

    meta = {
        "config": config.to_dict(),
        "columns": list(header),
        "rows": len(rows),
        "tolerances": {
            "negative_eigenvalue_threshold": NEGATIVE_EIG_THRESHOLD,
            "flag_merge": _bounds.FLAG_MERGE_TOL,
            "flag_orthogonality": _bounds.ORTHOGONALITY_TOL,
            "flag_weight_floor": _effective.FLAG_WEIGHT_FLOOR,
        },
        "seed": config.seed,
        "jobs": config.jobs,
        "wall_time_s": elapsed,
        "version": _version,
    }
    meta.update(extra_meta)
    meta_path = csv_path.with_suffix(".json")
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")

    plot_path = None
    if config.plot:
        from . import plotting

        plot_path = plotting.render_report(config.mode, header, rows, csv_path.with_suffix(".png"))
    return RunResult(csv_path, meta_path, plot_path, tuple(header), rows)
