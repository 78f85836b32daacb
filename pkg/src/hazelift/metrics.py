"""Dehazing quality metrics.

No-reference: visible-edge count ratio (qe), saturated-pixel fraction (bwar),
relative average gradient (rag), hue deviation index (hdi), colourfulness and
its enhancement factor (cef). Full-reference: mssim, psnr, mae, mse.

Degenerate denominators return +inf as a sentinel rather than raising, so
batch runs can flag them instead of aborting.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from .edges import linear_edge
from .image import check_gray, check_image, rgb_to_hsv

VISIBLE_EDGE_THRESHOLD = 0.1
SATURATION_FLOOR = 1.0 / 255.0


def avg_gradient(g: np.ndarray) -> float:
    """Mean central-difference gradient magnitude over interior pixels."""
    g = check_gray(g)
    if min(g.shape) < 3:
        raise ValueError("image must be at least 3x3")
    gx = (g[1:-1, 2:] - g[1:-1, :-2]) / 2.0
    gy = (g[2:, 1:-1] - g[:-2, 1:-1]) / 2.0
    return float(np.sqrt(gx * gx + gy * gy).mean())


def rag(orig: np.ndarray, enh: np.ndarray) -> float:
    """avg_gradient(enh) / avg_gradient(orig); +inf when the original is flat."""
    orig, enh = check_gray(orig), check_gray(enh)
    if orig.shape != enh.shape:
        raise ValueError("images must share dimensions")
    base = avg_gradient(orig)
    if base == 0.0:
        return math.inf
    return avg_gradient(enh) / base


def hdi(orig: np.ndarray, enh: np.ndarray) -> float:
    """Mean circular hue distance in degrees over chromatic pixels.

    Pixels achromatic in either image (saturation below 1/255) carry no hue
    and are excluded; an all-achromatic pair scores 0.
    """
    orig, enh = check_image(orig), check_image(enh)
    if orig.ndim != 3 or enh.ndim != 3 or orig.shape != enh.shape:
        raise ValueError("hdi needs two 3-channel images of the same size")
    hsv_a = rgb_to_hsv(orig)
    hsv_b = rgb_to_hsv(enh)
    chromatic = (hsv_a[..., 1] >= SATURATION_FLOOR) & (hsv_b[..., 1] >= SATURATION_FLOOR)
    if not chromatic.any():
        return 0.0
    diff = np.abs(hsv_a[..., 0] - hsv_b[..., 0])[chromatic] * 360.0
    return float(np.minimum(diff, 360.0 - diff).mean())


def colourfulness(img: np.ndarray) -> float:
    """Opponent-channel colourfulness on [0, 255]-scaled samples:
    C = sqrt(var_rg + var_yb) + 0.3 sqrt(mean_rg^2 + mean_yb^2)."""
    img = check_image(img)
    if img.ndim != 3:
        raise ValueError("colourfulness needs a 3-channel image")
    scaled = img * 255.0
    rg = scaled[..., 0] - scaled[..., 1]
    yb = 0.5 * (scaled[..., 0] + scaled[..., 1]) - scaled[..., 2]
    sigma = math.sqrt(float(rg.var() + yb.var()))
    mu = math.sqrt(float(rg.mean() ** 2 + yb.mean() ** 2))
    return sigma + 0.3 * mu


def cef(orig: np.ndarray, enh: np.ndarray) -> float:
    """colourfulness(enh) / colourfulness(orig); +inf for an achromatic original."""
    base = colourfulness(orig)
    if base == 0.0:
        return math.inf
    return colourfulness(enh) / base


def visible_edge_ratio_qe(orig: np.ndarray, enh: np.ndarray) -> float:
    """Ratio of pixels whose sobel magnitude exceeds 0.1, enhanced over original."""
    orig, enh = check_gray(orig), check_gray(enh)
    if orig.shape != enh.shape:
        raise ValueError("images must share dimensions")
    n0 = int((linear_edge(orig, "sobel") > VISIBLE_EDGE_THRESHOLD).sum())
    nr = int((linear_edge(enh, "sobel") > VISIBLE_EDGE_THRESHOLD).sum())
    if n0 == 0:
        return math.inf
    return nr / n0


def bwar(enh: np.ndarray) -> float:
    """Fraction of saturated pixels (at most 1/255 or at least 254/255)."""
    enh = check_gray(enh)
    saturated = (enh <= 1.0 / 255.0) | (enh >= 254.0 / 255.0)
    return float(saturated.mean())


def _gaussian_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    half = size // 2
    x = np.arange(-half, half + 1, dtype=np.float64)
    g1 = np.exp(-(x * x) / (2.0 * sigma * sigma))
    win = np.outer(g1, g1)
    return win / win.sum()


def mssim(a: np.ndarray, b: np.ndarray, k1: float = 0.01, k2: float = 0.03) -> float:
    """Mean structural similarity with an 11x11 Gaussian window, sigma 1.5.

    Dynamic range is 1 (samples live in [0, 1]); the SSIM map is evaluated at
    every position where the full window fits and averaged.
    """
    a, b = check_gray(a), check_gray(b)
    if a.shape != b.shape:
        raise ValueError("images must share dimensions")
    if min(a.shape) < 11:
        raise ValueError("images must be at least 11x11")
    win = _gaussian_window()
    half = win.shape[0] // 2

    def wmean(img: np.ndarray) -> np.ndarray:
        full = ndimage.correlate(img, win, mode="constant")
        return full[half:-half, half:-half]

    c1 = k1 * k1
    c2 = k2 * k2
    mu_a = wmean(a)
    mu_b = wmean(b)
    var_a = wmean(a * a) - mu_a * mu_a
    var_b = wmean(b * b) - mu_b * mu_b
    cov = wmean(a * b) - mu_a * mu_b
    ssim_map = ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) / (
        (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2))
    return float(ssim_map.mean())


def full_reference(a: np.ndarray, b: np.ndarray) -> tuple[float, float, float]:
    """(psnr_db, mae, mse) on [0, 255]-scaled samples; psnr is +inf for equal inputs."""
    a, b = check_image(a), check_image(b)
    if a.shape != b.shape:
        raise ValueError("images must share shape")
    diff = (a - b) * 255.0
    mse = float((diff * diff).mean())
    mae = float(np.abs(diff).mean())
    if mse == 0.0:
        return math.inf, mae, mse
    psnr = 10.0 * math.log10(255.0 ** 2 / mse)
    return psnr, mae, mse
