"""Gradient / homogeneity map generators.

Three families of detectors produce a non-negative per-pixel response that is
near zero over smooth (sky-like) regions and large over detail:

* statistical dispersion filters over a sliding w x w window (``stat_filter``):
  standard deviation (sdf), median absolute deviation (madf), average absolute
  deviation (aadf), range (rf), interquartile range (iqrf), Gini mean
  difference (mdf) and its mean-relative form (rmdf);
* classic linear kernels (``linear_edge``): sobel, prewitt, roberts,
  Laplacian-of-Gaussian (log) and its zero crossings (zerocross);
* a rule-based fuzzy detector (``fuzzy_edge``) built on the sobel gradients.

All windowed operations replicate the border so no artificial edges appear at
the image boundary. ``benchmark_filters`` times the detectors with a monotonic
clock for runtime comparisons across window sizes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .image import check_gray

STAT_FILTERS = ("sdf", "madf", "aadf", "rf", "iqrf", "mdf", "rmdf")
LINEAR_FILTERS = ("sobel", "prewitt", "roberts", "log", "zerocross")
ALL_FILTERS = STAT_FILTERS + LINEAR_FILTERS + ("fuzzy",)

# responses this small on a sum-zero kernel are floating-point residue
_ZERO_FLOOR = 1e-10

# cap on the transient window stack used by the order-statistic filters
_MAX_STACK_ELEMENTS = 8_000_000


def _check_window(g: np.ndarray, window: int) -> int:
    window = int(window)
    if window % 2 == 0 or window < 3:
        raise ValueError(f"window must be an odd integer >= 3, got {window}")
    if window > min(g.shape):
        raise ValueError(f"window {window} exceeds image extent {min(g.shape)}")
    return window


def _window_mean(padded: np.ndarray, shape, window: int) -> np.ndarray:
    h, w = shape
    acc = np.zeros(shape, dtype=np.float64)
    for dy in range(window):
        for dx in range(window):
            acc += padded[dy:dy + h, dx:dx + w]
    return acc / (window * window)


def _stack_blocks(padded: np.ndarray, shape, window: int):
    """Yield (y0, y1, stack) where stack holds every window sample per pixel.

    The stack has shape (window**2, y1 - y0, W); rows are processed in blocks
    so memory stays bounded for large windows.
    """
    h, w = shape
    n = window * window
    rows = max(1, min(h, _MAX_STACK_ELEMENTS // max(n * w, 1)))
    for y0 in range(0, h, rows):
        y1 = min(y0 + rows, h)
        stack = np.empty((n, y1 - y0, w), dtype=np.float64)
        k = 0
        for dy in range(window):
            for dx in range(window):
                stack[k] = padded[dy + y0:dy + y1, dx:dx + w]
                k += 1
        yield y0, y1, stack


def stat_filter(g: np.ndarray, kind: str, window: int) -> np.ndarray:
    """Per-pixel dispersion statistic over the replicate-padded window.

    kinds: sdf (population standard deviation), madf (median of |x - median|),
    aadf (mean of |x - mean|), rf (max - min), iqrf (Q3 - Q1 with linear
    interpolation), mdf (mean of |xi - xj| over all ordered pairs), rmdf
    (mdf / window mean, zero where the mean is zero).
    """
    g = check_gray(g)
    if kind not in STAT_FILTERS:
        raise ValueError(f"unknown statistical filter {kind!r}")
    window = _check_window(g, window)
    r = window // 2
    n = window * window
    h, w = g.shape
    padded = np.pad(g, r, mode="edge")

    if kind in ("sdf", "aadf"):
        # two-pass form avoids the cancellation of the sum-of-squares shortcut
        mean = _window_mean(padded, g.shape, window)
        acc = np.zeros_like(g)
        for dy in range(window):
            for dx in range(window):
                d = padded[dy:dy + h, dx:dx + w] - mean
                acc += d * d if kind == "sdf" else np.abs(d)
        acc /= n
        return np.sqrt(acc) if kind == "sdf" else acc

    if kind == "rf":
        mx = np.full_like(g, -np.inf)
        mn = np.full_like(g, np.inf)
        for dy in range(window):
            for dx in range(window):
                s = padded[dy:dy + h, dx:dx + w]
                np.maximum(mx, s, out=mx)
                np.minimum(mn, s, out=mn)
        return mx - mn

    out = np.empty_like(g)
    if kind == "madf":
        for y0, y1, stack in _stack_blocks(padded, g.shape, window):
            med = np.median(stack, axis=0)
            out[y0:y1] = np.median(np.abs(stack - med), axis=0)
        return out

    if kind == "iqrf":
        for y0, y1, stack in _stack_blocks(padded, g.shape, window):
            q75, q25 = np.percentile(stack, [75.0, 25.0], axis=0)
            out[y0:y1] = q75 - q25
        return out

    # mdf / rmdf share the sorted-stack weighted sum:
    # sum_{i<j}(x_(j) - x_(i)) = sum_k (2k - n + 1) x_(k) for 0-indexed k;
    # the weights sum to zero, so the window minimum can be subtracted first,
    # which keeps a constant window at exactly zero
    weights = (2.0 * np.arange(n) - n + 1.0)[:, None, None]
    for y0, y1, stack in _stack_blocks(padded, g.shape, window):
        stack.sort(axis=0)
        mean = stack.mean(axis=0)
        stack -= stack[0].copy()
        gini = 2.0 * (weights * stack).sum(axis=0) / (n * n)
        if kind == "mdf":
            out[y0:y1] = gini
        else:
            out[y0:y1] = np.divide(gini, mean, out=np.zeros_like(gini), where=mean > 0)
    return out


def _directional_gradients(g: np.ndarray, center_weight: float) -> tuple[np.ndarray, np.ndarray]:
    """Sobel-family Gx, Gy in difference form.

    Computing the cross-row differences first keeps a constant image at
    exactly zero, which a kernel dot product does not guarantee in floating
    point. center_weight 2 gives the sobel kernels, 1 the prewitt kernels.
    """
    p = np.pad(g, 1, mode="edge")
    dx = p[:, 2:] - p[:, :-2]
    gx = dx[:-2] + center_weight * dx[1:-1] + dx[2:]
    dy = p[2:, :] - p[:-2, :]
    gy = dy[:, :-2] + center_weight * dy[:, 1:-1] + dy[:, 2:]
    return gx, gy


def _log_kernel(sigma: float = 2.0, size: int = 13) -> np.ndarray:
    half = size // 2
    y, x = np.mgrid[-half:half + 1, -half:half + 1].astype(np.float64)
    r2 = x * x + y * y
    k = (r2 - 2.0 * sigma ** 2) / sigma ** 4 * np.exp(-r2 / (2.0 * sigma ** 2))
    return k - k.mean()  # zero-sum so a constant image gives zero response


def _log_response(g: np.ndarray) -> np.ndarray:
    resp = ndimage.correlate(g, _log_kernel(), mode="nearest")
    resp[np.abs(resp) < _ZERO_FLOOR] = 0.0
    return resp


def linear_edge(g: np.ndarray, kind: str) -> np.ndarray:
    """Classic kernel-based edge response.

    sobel / prewitt / roberts return the gradient magnitude sqrt(Gx^2 + Gy^2);
    log returns |Laplacian-of-Gaussian| (sigma 2, 13 x 13 kernel); zerocross
    marks sign changes of the LoG response with a 0/1 map.
    """
    g = check_gray(g)
    if kind in ("sobel", "prewitt"):
        gx, gy = _directional_gradients(g, 2.0 if kind == "sobel" else 1.0)
        return np.hypot(gx, gy)
    if kind == "roberts":
        p = np.pad(g, ((0, 1), (0, 1)), mode="edge")
        g1 = p[:-1, :-1] - p[1:, 1:]
        g2 = p[:-1, 1:] - p[1:, :-1]
        return np.hypot(g1, g2)
    if kind == "log":
        return np.abs(_log_response(g))
    if kind == "zerocross":
        resp = _log_response(g)
        zc = np.zeros_like(g)
        sign_flip_x = resp[:, :-1] * resp[:, 1:] < 0
        sign_flip_y = resp[:-1, :] * resp[1:, :] < 0
        zc[:, :-1][sign_flip_x] = 1.0
        zc[:-1, :][sign_flip_y] = 1.0
        return zc
    raise ValueError(f"unknown linear filter {kind!r}")


def fuzzy_edge(g: np.ndarray, theta: float = 0.25) -> np.ndarray:
    """Rule-based fuzzy detector: IF |Gx| is high OR |Gy| is high THEN edge.

    Membership high(t) = min(1, t / theta) on the sobel gradient components;
    theta = 0.25 saturates the response on a full-scale step. Output in [0, 1].
    """
    g = check_gray(g)
    if theta <= 0:
        raise ValueError("theta must be positive")
    gx, gy = _directional_gradients(g, 2.0)
    return np.minimum(np.maximum(np.abs(gx), np.abs(gy)) / theta, 1.0)


def gradient_map(g: np.ndarray, kind: str, window: int = 15) -> np.ndarray:
    """Dispatch to the detector named by ``kind``; window applies to the
    statistical family only."""
    if kind in STAT_FILTERS:
        return stat_filter(g, kind, window)
    if kind in LINEAR_FILTERS:
        return linear_edge(g, kind)
    if kind == "fuzzy":
        return fuzzy_edge(g)
    raise ValueError(f"unknown filter {kind!r}")


@dataclass(frozen=True)
class BenchRow:
    """One timed (filter, window) cell of the runtime comparison."""

    kind: str
    window: int
    seconds: float


def benchmark_filters(g: np.ndarray, kinds, windows, repeats: int = 5) -> list[BenchRow]:
    """Median wall time per (kind, window) over ``repeats`` runs.

    A warm-up run is discarded before timing; linear and fuzzy kinds ignore
    the window but still produce one row per pair. The timed section runs
    single-threaded for comparability.
    """
    g = check_gray(g)
    kinds = list(kinds)
    windows = [int(w) for w in windows]
    if not kinds or not windows:
        raise ValueError("kinds and windows must be non-empty")
    if repeats < 3:
        raise ValueError("repeats must be >= 3 for a stable median")
    rows = []
    for kind in kinds:
        if kind not in ALL_FILTERS:
            raise ValueError(f"unknown filter {kind!r}")
        for window in windows:
            gradient_map(g, kind, window)  # warm-up, result discarded
            times = []
            for _ in range(repeats):
                start = time.perf_counter()
                gradient_map(g, kind, window)
                times.append(time.perf_counter() - start)
            rows.append(BenchRow(kind, window, float(np.median(times))))
    return rows
