"""Image containers, file I/O and colour primitives shared by the toolkit.

Images are float64 numpy arrays with samples in [0, 1]: grayscale maps have
shape (H, W), colour images shape (H, W, 3). 8-bit quantization happens only
at file boundaries so the iterative enhancement stays numerically clean.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

SUPPORTED_EXTENSIONS = {".png", ".jpg", ".jpeg", ".bmp"}


def check_image(img) -> np.ndarray:
    """Validate a gray or RGB image array and return it as float64."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        pass
    elif arr.ndim == 3 and arr.shape[2] == 3:
        pass
    else:
        raise ValueError(f"expected (H, W) or (H, W, 3) array, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty image")
    if not np.isfinite(arr).all():
        raise ValueError("image contains non-finite samples")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("image samples must lie in [0, 1]")
    return arr


def check_gray(img) -> np.ndarray:
    """Validate a single-channel image array and return it as float64."""
    arr = check_image(img)
    if arr.ndim != 2:
        raise ValueError(f"expected a single-channel (H, W) array, got shape {arr.shape}")
    return arr


def load_image(path) -> np.ndarray:
    """Load a PNG/JPEG/BMP file into a float array in [0, 1].

    Grayscale files yield an (H, W) array, colour files (H, W, 3).
    """
    path = Path(path)
    if path.suffix.lower() not in SUPPORTED_EXTENSIONS:
        raise ValueError(f"unsupported image format: {path.suffix!r}")
    with Image.open(path) as im:
        if im.mode in ("L", "1", "I", "I;16"):
            im = im.convert("L")
        else:
            im = im.convert("RGB")
        arr = np.asarray(im, dtype=np.float64)
    return arr / 255.0


def save_image(img: np.ndarray, path) -> None:
    """Quantize samples with round(s * 255) and write the file.

    PNG output is lossless; the interchange format for tests.
    """
    arr = check_image(img)
    path = Path(path)
    if path.suffix.lower() not in SUPPORTED_EXTENSIONS:
        raise ValueError(f"unsupported image format: {path.suffix!r}")
    data = np.rint(arr * 255.0).astype(np.uint8)
    mode = "L" if data.ndim == 2 else "RGB"
    Image.fromarray(data, mode=mode).save(path)


def to_gray(img: np.ndarray) -> np.ndarray:
    """BT.601 luma: Y = 0.299 R + 0.587 G + 0.114 B. Gray input passes through."""
    arr = check_image(img)
    if arr.ndim == 2:
        return arr
    return 0.299 * arr[..., 0] + 0.587 * arr[..., 1] + 0.114 * arr[..., 2]


def rgb_to_hsv(img: np.ndarray) -> np.ndarray:
    """Hexcone RGB -> HSV with hue normalized to [0, 1) (1 unit = 360 degrees)."""
    arr = check_image(img)
    if arr.ndim != 3:
        raise ValueError("rgb_to_hsv needs a 3-channel image")
    r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
    mx = arr.max(axis=-1)
    mn = arr.min(axis=-1)
    delta = mx - mn

    s = np.zeros_like(mx)
    nz = mx > 0
    s[nz] = delta[nz] / mx[nz]

    h = np.zeros_like(mx)
    chroma = delta > 0
    rm = chroma & (mx == r)
    gm = chroma & (mx == g) & ~rm
    bm = chroma & ~rm & ~gm
    h[rm] = ((g - b)[rm] / delta[rm]) % 6.0
    h[gm] = (b - r)[gm] / delta[gm] + 2.0
    h[bm] = (r - g)[bm] / delta[bm] + 4.0
    h = (h / 6.0) % 1.0
    return np.stack([h, s, mx], axis=-1)


def hsv_to_rgb(hsv: np.ndarray) -> np.ndarray:
    """Inverse hexcone conversion; exact inverse of rgb_to_hsv up to rounding."""
    arr = np.asarray(hsv, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError("hsv_to_rgb needs an (H, W, 3) array")
    h, s, v = arr[..., 0] * 6.0, arr[..., 1], arr[..., 2]
    i = np.floor(h).astype(np.int64) % 6
    f = h - np.floor(h)
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    r = np.choose(i, [v, q, p, p, t, v])
    g = np.choose(i, [t, v, v, q, p, p])
    b = np.choose(i, [p, p, t, v, v, q])
    return np.stack([r, g, b], axis=-1)


def normalize_minmax(g: np.ndarray) -> np.ndarray:
    """Affine rescale to [0, 1]; a constant map collapses to all zeros."""
    arr = np.asarray(g, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise ValueError("normalize_minmax needs finite samples")
    lo = arr.min()
    hi = arr.max()
    if hi == lo:
        return np.zeros_like(arr)
    return (arr - lo) / (hi - lo)
