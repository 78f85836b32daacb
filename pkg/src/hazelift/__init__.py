"""hazelift: single-image dehazing via sky-aware PDE contrast enhancement.

Detection decides whether an image contains sky or homogeneous regions from
the area ratio of its thresholded gradient map; the enhancement engine uses
that decision (or a log-illumination refinement) to steer an iterative
CLAHE-plus-diffusion update of the value channel. A metric suite and a batch
CLI harness round out the toolkit.
"""

from .clustering import FcmResult, FuzzyCMeans, fcm_cluster
from .edges import (
    ALL_FILTERS,
    LINEAR_FILTERS,
    STAT_FILTERS,
    BenchRow,
    benchmark_filters,
    fuzzy_edge,
    gradient_map,
    linear_edge,
    stat_filter,
)
from .enhance import (
    EnhanceConfig,
    IrDecomposition,
    clahe,
    enhance_dispatch,
    ir_decompose,
    lir_refine,
    pde_enhance,
)
from .estimators import HazeEnhancer, SkyDetector
from .harness import (
    DatasetManifest,
    ManifestEntry,
    MetricRecord,
    RunSummary,
    emit_bench_csv,
    emit_metrics_csv,
    parse_manifest,
    run_batch,
)
from .image import (
    hsv_to_rgb,
    load_image,
    normalize_minmax,
    rgb_to_hsv,
    save_image,
    to_gray,
)
from .metrics import (
    avg_gradient,
    bwar,
    cef,
    colourfulness,
    full_reference,
    hdi,
    mssim,
    rag,
    visible_edge_ratio_qe,
)
from .sky import (
    NO_SKY,
    SKY,
    SkyReport,
    classify_dataset,
    cluster_ratios,
    detect_sky,
    homogeneity_ratio,
)
from .thresholds import (
    BinaryMap,
    DegenerateMapError,
    area_counts,
    binarize,
    entropy_threshold,
    isodata_threshold,
    otsu_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_FILTERS",
    "BenchRow",
    "BinaryMap",
    "DatasetManifest",
    "DegenerateMapError",
    "EnhanceConfig",
    "FcmResult",
    "FuzzyCMeans",
    "HazeEnhancer",
    "IrDecomposition",
    "LINEAR_FILTERS",
    "ManifestEntry",
    "MetricRecord",
    "NO_SKY",
    "RunSummary",
    "SKY",
    "STAT_FILTERS",
    "SkyDetector",
    "SkyReport",
    "area_counts",
    "avg_gradient",
    "benchmark_filters",
    "binarize",
    "bwar",
    "cef",
    "clahe",
    "classify_dataset",
    "cluster_ratios",
    "colourfulness",
    "detect_sky",
    "emit_bench_csv",
    "emit_metrics_csv",
    "enhance_dispatch",
    "entropy_threshold",
    "fcm_cluster",
    "full_reference",
    "fuzzy_edge",
    "gradient_map",
    "hdi",
    "homogeneity_ratio",
    "hsv_to_rgb",
    "ir_decompose",
    "isodata_threshold",
    "linear_edge",
    "lir_refine",
    "load_image",
    "mssim",
    "normalize_minmax",
    "otsu_threshold",
    "parse_manifest",
    "pde_enhance",
    "rag",
    "rgb_to_hsv",
    "run_batch",
    "save_image",
    "stat_filter",
    "to_gray",
    "visible_edge_ratio_qe",
]
