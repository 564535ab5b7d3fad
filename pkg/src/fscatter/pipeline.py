"""Operational shell: ingestion, normalization, padding, feature export,
and the size-sweep benchmark that tracks nonzero growth and generation
cost.

Exported artifacts are deterministic for a fixed config and inputs: wall
times live only on the in-memory records (and the bench report), never in
exported feature files.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .engine import (
    FeatureVector,
    LayerRepresentation,
    ScatterConfig,
    forward_layer,
    scatter_with_layers,
)
from .filters import FilterBank, generate_filterbank
from .fourier import HalfSpectrum, fft
from .wavio import ingest_wav

__all__ = [
    "DegenerateInputError",
    "PipelineConfig",
    "FeatureRecord",
    "BenchRow",
    "BenchReport",
    "normalize_input",
    "pad_to_pow2",
    "get_layer_banks",
    "run_extract",
    "run_bench",
    "export_features",
    "load_features_json",
    "format_float",
]

DEFAULT_SEED = 2016


class DegenerateInputError(ValueError):
    """Input signal carries no information (identically zero)."""


def normalize_input(x) -> np.ndarray:
    """Rescale so the L1 norm is one."""
    x = np.asarray(x, dtype=np.float64)
    total = np.abs(x).sum()
    if total == 0.0:
        raise DegenerateInputError("cannot normalize an all-zero signal")
    return x / total


def pad_to_pow2(x) -> np.ndarray:
    """Zero-pad to the next power of two (minimum length 2, the smallest
    transformable size); a power-of-two input is returned unchanged."""
    x = np.asarray(x, dtype=np.float64)
    size = x.shape[0]
    if size < 1:
        raise ValueError("empty signal")
    target = 2 if size <= 2 else 1 << (size - 1).bit_length()
    if target == size:
        return x
    return np.concatenate([x, np.zeros(target - size)])


@dataclass(frozen=True)
class PipelineConfig:
    scatter: ScatterConfig
    inputs: tuple[str, ...] = ()
    out_path: str | None = None
    fmt: str = "json"
    bench_sizes: tuple[int, ...] = ()  # exponents k for n = 2^k
    bench_repeats: int = 3
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "bench_sizes", tuple(self.bench_sizes))
        if not self.inputs and not self.bench_sizes:
            raise ValueError("need at least one input file or a bench size sweep")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.fmt!r}")


@dataclass
class FeatureRecord:
    source: str
    n: int
    original_length: int
    sample_rate: int | None
    config: ScatterConfig
    features: FeatureVector
    nnz_per_layer: tuple[int, ...]
    sparsity_per_layer: tuple[float, ...]
    wall_time_bank: float
    wall_time_scatter: float


_BANK_CACHE: dict[tuple, FilterBank] = {}


def get_layer_banks(config: ScatterConfig, n: int) -> tuple[FilterBank, ...]:
    """Per-layer renormalized banks, cached by (n, q, j, epsilon)."""
    banks = []
    for q, j in zip(config.qs, config.js):
        key = (n, q, j, config.epsilon)
        bank = _BANK_CACHE.get(key)
        if bank is None:
            bank = generate_filterbank(n, q, j, config.epsilon, normalize=True)
            _BANK_CACHE[key] = bank
        banks.append(bank)
    return tuple(banks)


def _layer_telemetry(layers, n):
    """Stored-bin counts and sparsity percentages for layers 1..L (each node
    viewed as a sparse length-n spectrum, as for the bank sparsity)."""
    nnz, sparsity = [], []
    for layer in layers[1:]:
        count = sum(node.width for node in layer.nodes.values())
        nnz.append(count)
        sparsity.append(100.0 * (1.0 - count / (len(layer.nodes) * n)))
    return tuple(nnz), tuple(sparsity)


def _extract_one(source, x, rate, config: ScatterConfig) -> FeatureRecord:
    x = normalize_input(x)
    original = x.shape[0]
    x = pad_to_pow2(x)
    n = x.shape[0]
    t0 = time.perf_counter()
    banks = get_layer_banks(config, n)
    t1 = time.perf_counter()
    features, layers = scatter_with_layers(x, banks, config)
    t2 = time.perf_counter()
    nnz, sparsity = _layer_telemetry(layers, n)
    return FeatureRecord(
        source=source,
        n=n,
        original_length=original,
        sample_rate=rate,
        config=config,
        features=features,
        nnz_per_layer=nnz,
        sparsity_per_layer=sparsity,
        wall_time_bank=t1 - t0,
        wall_time_scatter=t2 - t1,
    )


def run_extract(config: PipelineConfig):
    """Ingest -> normalize -> pad -> scatter for every input, in order.

    Returns (records, failures); a failing file is reported and skipped,
    never aborting the rest of the batch.
    """
    records, failures = [], []
    for path in config.inputs:
        try:
            x, rate = ingest_wav(path)
            records.append(_extract_one(str(path), x, rate, config.scatter))
        except Exception as exc:  # per-file isolation
            failures.append((str(path), exc))
            print(f"scatter: skipping {path}: {exc}", file=sys.stderr)
    return records, failures


@dataclass(frozen=True)
class BenchRow:
    n: int
    t_bank: float
    t_layer1: float
    t_layer2: float
    nnz_layer1: int
    nnz_layer2: int
    sparsity_layer1: float
    sparsity_layer2: float

    COLUMNS = (
        "n",
        "t_bank",
        "t_layer1",
        "t_layer2",
        "nnz_layer1",
        "nnz_layer2",
        "sparsity_layer1",
        "sparsity_layer2",
    )

    def as_tuple(self):
        return tuple(getattr(self, c) for c in self.COLUMNS)


@dataclass
class BenchReport:
    config: ScatterConfig
    seed: int
    rows: list[BenchRow] = field(default_factory=list)

    def to_json(self) -> str:
        doc = {
            "config": _config_doc(self.config),
            "seed": self.seed,
            "columns": list(BenchRow.COLUMNS),
            "rows": [list(r.as_tuple()) for r in self.rows],
        }
        return _dump_json(doc)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(BenchRow.COLUMNS)
        for r in self.rows:
            w.writerow(_format_cell(v) for v in r.as_tuple())
        return buf.getvalue()


def run_bench(config: PipelineConfig) -> BenchReport:
    """Size sweep on fixed-seed noise: times bank generation (best of
    `bench_repeats`) and the first two layers, and counts stored bins per
    layer."""
    sc = config.scatter
    report = BenchReport(config=sc, seed=config.seed)
    for k in config.bench_sizes:
        n = 1 << k
        rng = np.random.default_rng((config.seed, n))
        x = normalize_input(rng.standard_normal(n))

        t_bank = min(
            _time_once(lambda: _generate_all_banks(sc, n))
            for _ in range(max(1, config.bench_repeats))
        )
        banks = _generate_all_banks(sc, n)

        t0 = time.perf_counter()
        root = LayerRepresentation.root(HalfSpectrum.from_dense(fft(x)))
        layer1 = forward_layer(root, banks[0])
        t1 = time.perf_counter()
        layer2 = forward_layer(layer1, banks[1]) if sc.depth >= 2 else None
        t2 = time.perf_counter()

        nnz1 = sum(node.width for node in layer1.nodes.values())
        sp1 = 100.0 * (1.0 - nnz1 / (len(layer1.nodes) * n))
        if layer2 is not None:
            nnz2 = sum(node.width for node in layer2.nodes.values())
            sp2 = 100.0 * (1.0 - nnz2 / (len(layer2.nodes) * n))
        else:
            nnz2, sp2 = 0, 100.0
        report.rows.append(
            BenchRow(
                n=n,
                t_bank=t_bank,
                t_layer1=t1 - t0,
                t_layer2=t2 - t1,
                nnz_layer1=nnz1,
                nnz_layer2=nnz2,
                sparsity_layer1=sp1,
                sparsity_layer2=sp2,
            )
        )
    return report


def _generate_all_banks(sc: ScatterConfig, n: int):
    return tuple(
        generate_filterbank(n, q, j, sc.epsilon, normalize=True)
        for q, j in zip(sc.qs, sc.js)
    )


def _time_once(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


# ---------------------------------------------------------------------------
# export

def format_float(x: float) -> str:
    """17 significant digits: parses back to the identical double."""
    return format(float(x), ".17g")


def _format_cell(v) -> str:
    return format_float(v) if isinstance(v, float) else str(v)


def _config_doc(sc: ScatterConfig) -> dict:
    return {
        "depth": sc.depth,
        "q": list(sc.qs),
        "j": list(sc.js),
        "epsilon": sc.epsilon,
        "sigma_time": None if sc.sigma_time is None else list(sc.sigma_time),
    }


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _record_doc(rec: FeatureRecord) -> dict:
    return {
        "source": rec.source,
        "n": rec.n,
        "original_length": rec.original_length,
        "sample_rate": rec.sample_rate,
        "features": [
            {"path": list(e.path), "s": e.s, "v": e.v} for e in rec.features
        ],
        "telemetry": {
            "nnz_per_layer": list(rec.nnz_per_layer),
            "sparsity_per_layer": list(rec.sparsity_per_layer),
        },
    }


def export_features(records, fmt: str, path) -> None:
    """Write feature records as JSON (one document) or CSV (one row per
    feature entry).  Output is deterministic: timings are not exported."""
    if not records:
        raise ValueError("no records to export")
    text = features_to_json(records) if fmt == "json" else features_to_csv(records)
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def features_to_json(records) -> str:
    doc = {
        "config": _config_doc(records[0].config),
        "records": [_record_doc(r) for r in records],
    }
    return _dump_json(doc)


def features_to_csv(records) -> str:
    depth = records[0].config.depth
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["source", "layer"] + [f"i{i}" for i in range(1, depth + 1)] + ["s", "v"])
    for rec in records:
        for e in rec.features:
            idx = [str(i) for i in e.path] + [""] * (depth - len(e.path))
            w.writerow([rec.source, len(e.path)] + idx + [format_float(e.s), format_float(e.v)])
    return buf.getvalue()


def load_features_json(path) -> dict:
    """Parse an exported JSON document (floats round-trip bit-exactly)."""
    with open(path) as fh:
        return json.load(fh)
