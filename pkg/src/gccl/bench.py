"""Formation and incremental-learning benchmarks over scaled categorical data,
reported as lattice-size and running-time tables."""
from __future__ import annotations

import logging
import random
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

from gccl.context import FormalContext, ManyValuedContext, iter_bits
from gccl.process import IncrementBatch, LearningState, extend
from gccl.scaling import MissingPolicy, NominalScale, build_scale, read_schema, read_table, scale_rows
from gccl.space import enumerate_concepts

log = logging.getLogger(__name__)

DEFAULT_BATCHES = (10, 100, 1000)

# published reference figures per (dataset, instances):
# (scaled attributes, concepts, initial seconds, {batch: seconds})
REFERENCE = {
    ("voting", 20): (32, 55, 0.0659, {10: 0.2186, 100: 0.3658, 1000: None}),
    ("voting", 50): (32, 97, 0.1122, {10: 0.2177, 100: 0.3734, 1000: None}),
    ("voting", 100): (32, 144, 0.2248, {10: 0.2192, 100: 0.4070, 1000: None}),
    ("mushroom", 200): (128, 311, 2.7160, {10: 0.2576, 100: 0.8398, 1000: 12.8152}),
    ("mushroom", 500): (128, 628, 9.3878, {10: 0.2800, 100: 1.1008, 1000: 15.1078}),
    ("mushroom", 1000): (128, 1141, 26.0752, {10: 0.3162, 100: 1.5070, 1000: 20.0294}),
    ("mushroom", 2000): (128, 2149, 81.2578, {10: 0.4056, 100: 2.4696, 1000: 28.6650}),
}

STANDARD_SUITE = (
    ("voting", (20, 50, 100)),
    ("mushroom", (200, 500, 1000, 2000)),
)


@dataclass
class Dataset:
    label: str
    table: ManyValuedContext
    scale: NominalScale
    rows: list[int]

    @property
    def attributes(self) -> list[str]:
        return self.scale.attributes

    def context(self, start: int, stop: int) -> FormalContext:
        return FormalContext(self.table.objects[start:stop], self.attributes, self.rows[start:stop])


def load_dataset(csv_path, schema_path, label: str | None = None, header: bool = True,
                 policy: MissingPolicy = MissingPolicy.NO_ATTRIBUTE, seed: int | None = None) -> Dataset:
    """Read, optionally shuffle (``seed``), and scale a CSV table."""
    columns = read_schema(schema_path)
    table = read_table(csv_path, columns, header=header)
    if seed is not None:
        order = list(range(len(table)))
        random.Random(seed).shuffle(order)
        table = ManyValuedContext([table.objects[i] for i in order], table.columns,
                                  [table.cells[i] for i in order])
    scale = build_scale(table, policy)
    return Dataset(label or Path(csv_path).stem, table, scale, scale_rows(table, scale))


@dataclass
class BenchRow:
    label: str
    instances: int
    attributes_original: int
    attributes_scaled: int
    concepts: int
    initial_seconds: float
    batch_seconds: dict[int, float | None] = field(default_factory=dict)


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    batch_sizes: tuple[int, ...] = DEFAULT_BATCHES


def _median_time(fn, repeats: int):
    times, result = [], None
    for _ in range(max(1, repeats)):
        started = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - started)
    return round(statistics.median(times), 5), result


def run_formation(dataset: Dataset, n: int, repeats: int = 3, threads: int = 1) -> tuple[LearningState, BenchRow]:
    """Form the concept space of the first ``n`` rows."""
    if n > len(dataset.rows):
        raise ValueError(f"{dataset.label}: {n} instances requested, {len(dataset.rows)} available")
    context = dataset.context(0, n)
    seconds, space = _median_time(lambda: enumerate_concepts(context, threads=threads), repeats)
    state = LearningState(context, space)
    row = BenchRow(dataset.label, n, len(dataset.table.columns), len(dataset.attributes), len(space), seconds)
    log.info("%s n=%d: %d concepts in %.4fs", dataset.label, n, len(space), seconds)
    return state, row


def object_batch(dataset: Dataset, start: int, size: int) -> IncrementBatch:
    width = len(dataset.attributes)
    items = []
    for name, row in zip(dataset.table.objects[start:start + size], dataset.rows[start:start + size]):
        cells = [False] * width
        for m in iter_bits(row):
            cells[m] = True
        items.append((name, cells))
    return IncrementBatch(new_objects=tuple(items))


def run_incremental(state: LearningState, dataset: Dataset, batch_sizes=DEFAULT_BATCHES,
                    repeats: int = 3) -> dict[int, float | None]:
    """Time one object batch of each size, each applied to ``state`` with the
    rows that follow the ones already in it. ``None`` marks too few rows."""
    start = state.context.n_objects
    available = len(dataset.rows) - start
    timings: dict[int, float | None] = {}
    for size in batch_sizes:
        if size > available:
            log.warning("%s: batch of %d skipped, only %d rows remain", dataset.label, size, available)
            timings[size] = None
            continue
        batch = object_batch(dataset, start, size)
        timings[size], _ = _median_time(lambda: extend(state, batch), repeats)
    return timings


def run_bench(suite, batch_sizes=DEFAULT_BATCHES, repeats: int = 3, threads: int = 1) -> BenchReport:
    """``suite`` is a list of ``(Dataset, instance counts)``."""
    report = BenchReport(batch_sizes=tuple(batch_sizes))
    for dataset, counts in suite:
        for n in counts:
            state, row = run_formation(dataset, n, repeats=repeats, threads=threads)
            row.batch_seconds = run_incremental(state, dataset, batch_sizes, repeats=repeats)
            report.rows.append(row)
    return report


def standard_suite(data_dir) -> list[tuple[Dataset, tuple[int, ...]]]:
    data_dir = Path(data_dir)
    return [(load_dataset(data_dir / f"{name}.csv", data_dir / f"{name}.schema", label=name), counts)
            for name, counts in STANDARD_SUITE]


def _fmt_seconds(value: float | None) -> str:
    return "--" if value is None else f"{value:.5f}"


def _cells(row: BenchRow, batch_sizes) -> list[str]:
    ref = REFERENCE.get((row.label, row.instances))
    if ref is None:
        ref_cells = ["", "", ""]
    else:
        ref_attrs, ref_concepts, _, _ = ref
        delta = 100.0 * (row.concepts - ref_concepts) / ref_concepts
        ref_cells = [str(ref_attrs), str(ref_concepts), f"{delta:+.1f}"]
    return ([row.label, str(row.instances), str(row.attributes_original), str(row.attributes_scaled),
             str(row.concepts), _fmt_seconds(row.initial_seconds)]
            + [_fmt_seconds(row.batch_seconds.get(size)) for size in batch_sizes]
            + ref_cells)


def report_header(batch_sizes) -> list[str]:
    return (["dataset", "instances", "attributes_o", "attributes_s", "concepts", "initial_s"]
            + [f"batch_{size}_s" for size in batch_sizes]
            + ["ref_attributes_s", "ref_concepts", "concepts_delta_pct"])


def emit_report(report: BenchReport, fmt: str = "tsv") -> str:
    header = report_header(report.batch_sizes)
    body = [_cells(row, report.batch_sizes) for row in report.rows]
    if fmt == "tsv":
        return "".join("\t".join(cells) + "\n" for cells in [header] + body)
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(cells) + " |" for cells in body]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
