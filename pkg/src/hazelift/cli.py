"""hazelift command line interface.

Subcommands: enhance (batch enhancement over a manifest), detect (sky
detection, CSV on stdout), bench (filter runtime comparison), cluster
(fuzzy grouping of ratio values, CSV on stdout).
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .edges import ALL_FILTERS, benchmark_filters
from .enhance import MODES, EnhanceConfig
from .harness import emit_bench_csv, emit_metrics_csv, parse_manifest, run_batch
from .image import load_image, normalize_minmax, save_image, to_gray
from .sky import cluster_ratios, detect_sky
from .thresholds import THRESHOLD_METHODS

DETECT_HEADER = "name,filter,window,threshold,ratio,decision"
CLUSTER_HEADER = "name,ratio,cluster,label"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hazelift",
                                     description="Single-image dehazing toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    enh = sub.add_parser("enhance", help="batch-enhance a manifest of images")
    enh.add_argument("--mode", choices=MODES, default="pa2")
    enh.add_argument("--manifest", required=True)
    enh.add_argument("--out", required=True)
    enh.add_argument("--config", help="key=value config file; overrides flags")
    enh.add_argument("--jobs", type=int, default=1)
    enh.add_argument("--metrics-csv")

    det = sub.add_parser("detect", help="sky detection, CSV on stdout")
    det.add_argument("--filter", choices=ALL_FILTERS, default="sdf")
    det.add_argument("--window", type=int, default=15)
    det.add_argument("--threshold", choices=sorted(THRESHOLD_METHODS), default="otsu")
    det.add_argument("--tau", type=float, default=0.01)
    det.add_argument("--export-maps", metavar="DIR")
    det.add_argument("inputs", nargs="+", metavar="INPUT")

    ben = sub.add_parser("bench", help="filter runtime comparison")
    ben.add_argument("--filters", required=True, help="comma-separated filter kinds")
    ben.add_argument("--windows", required=True, help="comma-separated odd window sizes")
    ben.add_argument("--image", required=True)
    ben.add_argument("--out", required=True)
    ben.add_argument("--repeats", type=int, default=5)

    clu = sub.add_parser("cluster", help="fuzzy grouping of ratios, CSV on stdout")
    clu.add_argument("--ratios", required=True,
                     help="CSV with name and ratio columns (detect output works)")
    return parser


def _cmd_enhance(args) -> int:
    if args.config:
        cfg = EnhanceConfig.from_file(args.config, mode=args.mode)
    else:
        cfg = EnhanceConfig(mode=args.mode).validate()
    manifest = parse_manifest(args.manifest)
    summary = run_batch(manifest, cfg, args.out, jobs=args.jobs)
    if args.metrics_csv:
        emit_metrics_csv(summary, args.metrics_csv)
    for failure in summary.failures:
        print(f"error: {failure}", file=sys.stderr)
    print(f"{len(summary.records)} image(s) enhanced in {summary.total_s:.2f}s, "
          f"{len(summary.failures)} failure(s)", file=sys.stderr)
    return 0 if summary.ok else 1


def _cmd_detect(args) -> int:
    print(DETECT_HEADER)
    export_dir = Path(args.export_maps) if args.export_maps else None
    if export_dir:
        export_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    for name in args.inputs:
        path = Path(name)
        try:
            img = load_image(path)
            report = detect_sky(img, args.filter, args.window, args.threshold, args.tau)
        except Exception as exc:
            print(f"error: {path.name}: {exc}", file=sys.stderr)
            status = 1
            continue
        print(f"{path.name},{report.filter_kind},{report.window},"
              f"{report.threshold_method},{report.ratio!r},{report.decision}")
        if export_dir:
            save_image(report.binary.bits.astype(float), export_dir / f"{path.stem}_binary.png")
            save_image(normalize_minmax(report.gradient), export_dir / f"{path.stem}_gradient.png")
    return status


def _cmd_bench(args) -> int:
    kinds = [k.strip() for k in args.filters.split(",") if k.strip()]
    windows = [int(w) for w in args.windows.split(",") if w.strip()]
    image = load_image(args.image)
    rows = benchmark_filters(to_gray(image), kinds, windows, repeats=args.repeats)
    emit_bench_csv(rows, args.out)
    return 0


def _cmd_cluster(args) -> int:
    with open(args.ratios, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "name" not in reader.fieldnames \
                or "ratio" not in reader.fieldnames:
            raise SystemExit(f"{args.ratios}: need a CSV with 'name' and 'ratio' columns")
        pairs = [(row["name"], float(row["ratio"])) for row in reader]
    records, _ = cluster_ratios(pairs)
    print(CLUSTER_HEADER)
    for name, ratio, cluster, label in records:
        print(f"{name},{ratio!r},{cluster},{label}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "enhance": _cmd_enhance,
        "detect": _cmd_detect,
        "bench": _cmd_bench,
        "cluster": _cmd_cluster,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
