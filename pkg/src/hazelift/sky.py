"""Image-global sky / homogeneous-region detection.

The pipeline: grayscale -> gradient map -> min-max normalization -> threshold
-> binary map -> homogeneity ratio (black over white area) -> decision. An
image is declared to contain sky when the ratio exceeds ``tau_sky``; textured
scenes keep the ratio near zero, scenes with flat regions push it toward the
flat-area fraction over the detail fraction.

The below-threshold class only counts as homogeneous when it actually sits
near the map's own minimum (mean normalized response at most
``homogeneity_gate``): a threshold that merely splits the bulk of a textured
map says nothing about smoothness, so such maps are treated as all detail
(ratio exactly zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clustering import fcm_cluster
from .edges import gradient_map
from .image import check_image, normalize_minmax, to_gray
from .thresholds import (
    THRESHOLD_METHODS,
    BinaryMap,
    DegenerateMapError,
    binarize,
)

SKY = "sky"
NO_SKY = "no_sky"


@dataclass(frozen=True)
class SkyReport:
    """Outcome of the detection pipeline for one image."""

    ratio: float
    decision: str
    gradient: np.ndarray
    binary: BinaryMap
    filter_kind: str
    window: int
    threshold_method: str
    threshold: float | None

    @property
    def is_sky(self) -> bool:
        return self.decision == SKY


def homogeneity_ratio(binary: BinaryMap) -> float:
    """black / white pixel area; +inf when the map is fully homogeneous."""
    if binary.white_count == 0:
        return math.inf
    return binary.black_count / binary.white_count


def detect_sky(img: np.ndarray, filter_kind: str = "sdf", window: int = 15,
               threshold_method: str = "otsu", tau_sky: float = 0.01,
               homogeneity_gate: float = 0.1) -> SkyReport:
    """Run the full detection pipeline on a gray or RGB image.

    A constant image has a degenerate gradient map and is treated as a pure
    homogeneous scene (all black, ratio +inf, decision sky).
    """
    if tau_sky < 0:
        raise ValueError("tau_sky must be non-negative")
    if threshold_method not in THRESHOLD_METHODS:
        raise ValueError(f"unknown threshold method {threshold_method!r}")
    gray = to_gray(check_image(img))
    gmap = gradient_map(gray, filter_kind, window)
    norm = normalize_minmax(gmap)
    try:
        t = float(THRESHOLD_METHODS[threshold_method](norm))
    except DegenerateMapError:
        binary = BinaryMap.from_bits(np.zeros(norm.shape, dtype=bool))
        ratio = homogeneity_ratio(binary)
        return SkyReport(ratio=ratio, decision=SKY if ratio > tau_sky else NO_SKY,
                         gradient=gmap, binary=binary, filter_kind=filter_kind,
                         window=window, threshold_method=threshold_method,
                         threshold=None)
    binary = binarize(norm, t)
    threshold: float | None = t
    if binary.black_count:
        black_mean = float(norm[~binary.bits].mean())
        if black_mean > homogeneity_gate:
            # the low class is not actually smooth: the image has no
            # homogeneous region at all, so every pixel counts as detail
            binary = BinaryMap.from_bits(np.ones(norm.shape, dtype=bool))
            threshold = None
    ratio = homogeneity_ratio(binary)
    return SkyReport(ratio=ratio, decision=SKY if ratio > tau_sky else NO_SKY,
                     gradient=gmap, binary=binary, filter_kind=filter_kind,
                     window=window, threshold_method=threshold_method,
                     threshold=threshold)


def _finite_for_clustering(ratios: np.ndarray) -> np.ndarray:
    """Map +inf sentinels to twice the largest finite ratio before clustering."""
    values = ratios.copy()
    infinite = ~np.isfinite(values)
    if infinite.any():
        finite = values[~infinite]
        cap = 2.0 * finite.max() if finite.size and finite.max() > 0 else 1.0
        values[infinite] = cap
    return values


def cluster_ratios(named_ratios, m: float = 2.0):
    """Fuzzy 2-group split of (name, ratio) pairs.

    Returns (records, result): records are (name, ratio, cluster, label)
    tuples in the input order with clusters renumbered so cluster 1 is the
    larger-center group, and result is the underlying :class:`FcmResult`.
    Zero ratios are always labelled no-sky; positive ratios sky.
    """
    named_ratios = list(named_ratios)
    if len(named_ratios) < 2:
        raise ValueError("need at least 2 ratios to cluster")
    names = [name for name, _ in named_ratios]
    ratios = np.array([float(r) for _, r in named_ratios])
    if (ratios < 0).any():
        raise ValueError("ratios must be non-negative")
    values = _finite_for_clustering(ratios)
    result = fcm_cluster(values, c=2, m=m)
    high = int(np.argmax(result.centers))
    clusters = (result.labels == high).astype(int)
    records = [
        (name, float(ratio), int(cluster), SKY if ratio > 0 else NO_SKY)
        for name, ratio, cluster in zip(names, ratios, clusters)
    ]
    return records, result


def classify_dataset(named_ratios) -> list[tuple[str, str]]:
    """Label each (name, ratio) pair sky / no-sky.

    Any positive homogeneity ratio means some smooth region exists, so only
    exact zeros are labelled no-sky. The fuzzy grouping is computed alongside
    (see :func:`cluster_ratios`) to expose how the ratio values separate.
    """
    records, _ = cluster_ratios(named_ratios)
    return [(name, label) for name, _, _, label in records]
