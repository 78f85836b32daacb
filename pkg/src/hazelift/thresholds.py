"""Binary thresholding of normalized gradient maps.

All methods work on a 256-bin histogram of samples in [0, 1] and return a
threshold in [0, 1]; ties resolve to the smallest maximizing threshold so
results are identical across platforms. A constant map (single occupied bin)
raises ``DegenerateMapError`` instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BINS = 256


class DegenerateMapError(ValueError):
    """The map is constant; no threshold separates anything."""


def histogram_256(g: np.ndarray) -> np.ndarray:
    """Integer counts over 256 equal bins of [0, 1] (samples at 1.0 go to bin 255)."""
    arr = np.asarray(g, dtype=np.float64)
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("samples must lie in [0, 1]")
    idx = np.minimum((arr * BINS).astype(np.int64), BINS - 1)
    return np.bincount(idx.ravel(), minlength=BINS)


def _bin_midpoint(k: int) -> float:
    return (k + 0.5) / BINS


def otsu_from_histogram(counts: np.ndarray) -> float:
    """Otsu threshold for integer bin counts: maximize the between-class
    variance w0 * w1 * (mu0 - mu1)^2 over the 256 candidate splits."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if (counts > 0).sum() <= 1:
        raise DegenerateMapError("histogram has a single occupied bin")
    levels = np.arange(BINS, dtype=np.float64)
    c0 = np.cumsum(counts)
    s0 = np.cumsum(counts * levels)
    c1 = total - c0
    s1 = s0[-1] - s0
    valid = (c0 > 0) & (c1 > 0)
    sigma_b = np.full(BINS, -1.0)
    mu0 = s0[valid] / c0[valid]
    mu1 = s1[valid] / c1[valid]
    gap = mu0 - mu1
    sigma_b[valid] = (c0[valid] / total) * (c1[valid] / total) * (gap * gap)
    return _bin_midpoint(int(np.argmax(sigma_b)))


def otsu_threshold(g: np.ndarray) -> float:
    return otsu_from_histogram(histogram_256(g))


def entropy_from_histogram(counts: np.ndarray) -> float:
    """Maximum-entropy (Kapur) threshold: maximize H0(k) + H1(k), the entropies
    of the two class distributions, over the 256 candidate splits."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if (counts > 0).sum() <= 1:
        raise DegenerateMapError("histogram has a single occupied bin")
    p = counts / total
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log(p), 0.0)
    cp = np.cumsum(p)
    cs = np.cumsum(plogp)
    p0 = cp
    p1 = cp[-1] - cp
    score = np.full(BINS, -np.inf)
    valid = (p0 > 0) & (p1 > 0)
    # H = -sum (p_i/P) log(p_i/P) = log P - (1/P) sum p_i log p_i
    h0 = np.log(p0[valid]) - cs[valid] / p0[valid]
    h1 = np.log(p1[valid]) - (cs[-1] - cs[valid]) / p1[valid]
    score[valid] = h0 + h1
    return _bin_midpoint(int(np.argmax(score)))


def entropy_threshold(g: np.ndarray) -> float:
    return entropy_from_histogram(histogram_256(g))


def isodata_threshold(g: np.ndarray, tol: float = 1.0 / 512.0, max_iter: int = 100) -> float:
    """Ridler-Calvard intermeans iteration on the raw samples.

    t0 is the global mean and t_{k+1} = (mean below + mean above) / 2; stops
    when the step is below ``tol`` or after ``max_iter`` iterations.
    """
    arr = np.asarray(g, dtype=np.float64).ravel()
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("samples must lie in [0, 1]")
    if arr.max() == arr.min():
        raise DegenerateMapError("constant map")
    t = float(arr.mean())
    for _ in range(max_iter):
        below = arr[arr <= t]
        above = arr[arr > t]
        if below.size == 0 or above.size == 0:
            break
        t_next = 0.5 * (float(below.mean()) + float(above.mean()))
        if abs(t_next - t) < tol:
            return t_next
        t = t_next
    return t


THRESHOLD_METHODS = {
    "otsu": otsu_threshold,
    "entropy": entropy_threshold,
    "isodata": isodata_threshold,
}


@dataclass(frozen=True)
class BinaryMap:
    """Thresholded map: True/white = detail, False/black = homogeneous."""

    bits: np.ndarray
    black_count: int
    white_count: int

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> "BinaryMap":
        bits = np.asarray(bits, dtype=bool)
        white = int(bits.sum())
        return cls(bits=bits, black_count=bits.size - white, white_count=white)

    @property
    def shape(self):
        return self.bits.shape


def binarize(g: np.ndarray, t: float) -> BinaryMap:
    """Split at ``t``: samples above the threshold are white (detail)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {t}")
    arr = np.asarray(g, dtype=np.float64)
    return BinaryMap.from_bits(arr > t)


def area_counts(b: BinaryMap) -> tuple[int, int]:
    """(black, white) pixel counts of a binary map."""
    return b.black_count, b.white_count
