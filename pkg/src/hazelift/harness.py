"""Batch driver: manifests, timed enhancement runs and CSV emission.

Records are produced in manifest order regardless of the worker count, and
metric values are independent of the concurrency level. Per-image wall time
covers detection plus enhancement (decoding and metric evaluation excluded),
measured with a monotonic clock.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

from . import metrics
from .edges import BenchRow
from .enhance import EnhanceConfig, enhance_dispatch
from .image import load_image, save_image, to_gray
from .sky import SKY

METRICS_HEADER = ("image,algorithm,qe,bwar,rag,hdi,cef,mssim,psnr,mae,mse,"
                  "ratio,sky,runtime_s,iterations")
BENCH_HEADER = "kind,window,seconds"


@dataclass(frozen=True)
class ManifestEntry:
    input_path: Path
    reference_path: Path | None
    group: str


@dataclass(frozen=True)
class DatasetManifest:
    entries: list

    def __len__(self) -> int:
        return len(self.entries)


def parse_manifest(path) -> DatasetManifest:
    """Read a CSV manifest with header ``input,reference,group``.

    The reference column may be empty. Every problem is reported with its
    line number; missing input files are errors, the manifest is rejected
    as a whole.
    """
    path = Path(path)
    problems = []
    entries = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty manifest") from None
        if [h.strip() for h in header] != ["input", "reference", "group"]:
            raise ValueError(f"{path}: line 1: header must be 'input,reference,group'")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 3:
                problems.append(f"line {lineno}: expected 3 fields, got {len(row)}")
                continue
            input_path = Path(row[0].strip())
            reference = row[1].strip()
            reference_path = Path(reference) if reference else None
            if not input_path.is_file():
                problems.append(f"line {lineno}: missing input file {input_path}")
            if reference_path is not None and not reference_path.is_file():
                problems.append(f"line {lineno}: missing reference file {reference_path}")
            entries.append(ManifestEntry(input_path, reference_path, row[2].strip()))
    if problems:
        raise ValueError(f"{path}: " + "; ".join(problems))
    return DatasetManifest(entries=entries)


@dataclass(frozen=True)
class MetricRecord:
    """One image's metric vector; absent values are None, +inf marks sentinels."""

    image_name: str
    algorithm: str
    qe: float | None = None
    bwar: float | None = None
    rag: float | None = None
    hdi: float | None = None
    cef: float | None = None
    mssim: float | None = None
    psnr: float | None = None
    mae: float | None = None
    mse: float | None = None
    ratio: float | None = None
    sky: str | None = None
    runtime_s: float | None = None
    iterations: int | None = None


_NUMERIC_COLUMNS = ("qe", "bwar", "rag", "hdi", "cef", "mssim", "psnr", "mae",
                    "mse", "ratio", "runtime_s", "iterations")


@dataclass(frozen=True)
class RunSummary:
    records: list
    failures: list
    averages: dict
    total_s: float

    @property
    def ok(self) -> bool:
        return not self.failures


def compute_averages(records) -> dict:
    """Per-algorithm arithmetic means of the finite values in each column.

    Sentinels (+inf) and absent values are excluded; a column with no finite
    values averages to None. The sentinel count per column is reported under
    ``<column>_sentinels``.
    """
    averages: dict = {}
    by_algorithm: dict = {}
    for record in records:
        by_algorithm.setdefault(record.algorithm, []).append(record)
    for algorithm, recs in by_algorithm.items():
        stats = {}
        for column in _NUMERIC_COLUMNS:
            values = [getattr(r, column) for r in recs if getattr(r, column) is not None]
            finite = [v for v in values if math.isfinite(v)]
            stats[column] = sum(finite) / len(finite) if finite else None
            stats[column + "_sentinels"] = len(values) - len(finite)
        averages[algorithm] = stats
    return averages


def _evaluate_entry(entry: ManifestEntry, cfg: EnhanceConfig, out_dir: Path) -> MetricRecord:
    img = load_image(entry.input_path)
    start = time.perf_counter()
    enhanced, report = enhance_dispatch(img, cfg)
    runtime = time.perf_counter() - start

    stem = entry.input_path.stem
    save_image(enhanced, out_dir / f"{stem}_{cfg.mode}.png")

    gray_in = to_gray(img)
    gray_out = to_gray(enhanced)
    colour = img.ndim == 3
    record = {
        "image_name": entry.input_path.name,
        "algorithm": cfg.mode,
        "qe": metrics.visible_edge_ratio_qe(gray_in, gray_out),
        "bwar": metrics.bwar(gray_out),
        "rag": metrics.rag(gray_in, gray_out),
        "hdi": metrics.hdi(img, enhanced) if colour else None,
        "cef": metrics.cef(img, enhanced) if colour else None,
        "runtime_s": runtime,
        "iterations": cfg.iterations,
    }
    if report is not None:
        record["ratio"] = report.ratio
        record["sky"] = report.decision
    if entry.reference_path is not None:
        ref = load_image(entry.reference_path)
        if ref.shape != img.shape:
            raise ValueError(f"reference {entry.reference_path} shape {ref.shape} "
                             f"does not match input shape {img.shape}")
        psnr, mae, mse = metrics.full_reference(ref, enhanced)
        record["mssim"] = metrics.mssim(to_gray(ref), gray_out)
        record["psnr"] = psnr
        record["mae"] = mae
        record["mse"] = mse
    return MetricRecord(**record)


def run_batch(manifest: DatasetManifest, cfg: EnhanceConfig, out_dir,
              jobs: int = 1) -> RunSummary:
    """Enhance every manifest entry, collect metrics, keep going on failures.

    Entries may be processed concurrently (``jobs`` workers) but the record
    list always follows manifest order and the values match a sequential run.
    """
    cfg.validate()
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()

    def worker(entry: ManifestEntry):
        try:
            return _evaluate_entry(entry, cfg, out_dir), None
        except Exception as exc:  # per-image failure, batch continues
            return None, f"{entry.input_path.name}: {exc}"

    if jobs == 1:
        outcomes = [worker(entry) for entry in manifest.entries]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(worker, manifest.entries))

    records = [record for record, _ in outcomes if record is not None]
    failures = [error for _, error in outcomes if error is not None]
    return RunSummary(records=records, failures=failures,
                      averages=compute_averages(records),
                      total_s=time.perf_counter() - start)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def metric_record_row(record: MetricRecord) -> str:
    cells = [_format_cell(getattr(record, f.name)) for f in fields(MetricRecord)]
    return ",".join(cells)


def emit_metrics_csv(summary: RunSummary, path) -> None:
    """Write per-image rows followed by one AVERAGE row per algorithm."""
    lines = [METRICS_HEADER]
    for record in summary.records:
        lines.append(metric_record_row(record))
    for algorithm in sorted(summary.averages):
        stats = summary.averages[algorithm]
        cells = ["AVERAGE", algorithm]
        for column in ("qe", "bwar", "rag", "hdi", "cef", "mssim", "psnr",
                       "mae", "mse", "ratio"):
            cells.append(_format_cell(stats[column]))
        cells.append("")  # sky is not averaged
        cells.append(_format_cell(stats["runtime_s"]))
        cells.append(_format_cell(stats["iterations"]))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def emit_bench_csv(rows, path) -> None:
    """Write benchmark rows sorted by (kind, window)."""
    lines = [BENCH_HEADER]
    for row in sorted(rows, key=lambda r: (r.kind, r.window)):
        lines.append(f"{row.kind},{row.window},{row.seconds!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def parse_bench_csv(path) -> list[BenchRow]:
    rows = []
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != BENCH_HEADER:
        raise ValueError(f"{path}: expected header {BENCH_HEADER!r}")
    for line in lines[1:]:
        kind, window, seconds = line.split(",")
        rows.append(BenchRow(kind, int(window), float(seconds)))
    return rows
