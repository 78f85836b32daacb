"""Deterministic synthetic scenes for calibration and acceptance runs.

Real foggy-road datasets with clear references cannot ship with the package,
so tests and desk-scale experiments use generated stand-ins: flat-band images
over noise for the detection suite, and textured scenes with a flat sky band
degraded by the standard scattering model I = J * t + A * (1 - t).
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage


def flat_band_image(height: int, width: int, band_fraction: float,
                    rng: np.random.Generator, band_value: float = 0.8) -> np.ndarray:
    """Grayscale image: constant band of the given fraction over uniform noise."""
    if not 0.0 <= band_fraction < 1.0:
        raise ValueError("band_fraction must lie in [0, 1)")
    img = rng.random((height, width))
    band = int(round(band_fraction * height))
    if band:
        img[:band, :] = band_value
    return img


def make_scene(height: int, width: int, sky_fraction: float,
               rng: np.random.Generator) -> np.ndarray:
    """Clear RGB scene: flat bluish sky band over colourful textured ground."""
    if not 0.0 <= sky_fraction < 1.0:
        raise ValueError("sky_fraction must lie in [0, 1)")
    img = np.zeros((height, width, 3))
    band = int(round(sky_fraction * height))
    img[:band] = np.array([0.72, 0.80, 0.88])
    gh = height - band
    coarse = rng.random((max(gh // 8, 1), max(width // 8, 1), 3))
    blocks = np.stack(
        [ndimage.zoom(coarse[..., c], (gh / coarse.shape[0], width / coarse.shape[1]), order=1)
         for c in range(3)],
        axis=-1,
    )
    fine = rng.random((gh, width, 3)) * 0.25
    img[band:] = np.clip(0.15 + 0.6 * blocks + fine, 0.0, 1.0)
    return img


def add_haze(img: np.ndarray, rng: np.random.Generator, t_min: float = 0.3,
             t_max: float = 0.8, airlight: float = 0.9) -> np.ndarray:
    """Apply I = J * t + A * (1 - t) with a smooth depth-like transmission field.

    Transmission ramps from t_min at the top to t_max at the bottom with a
    gentle smooth perturbation, clipped into [t_min, t_max].
    """
    if not 0.0 < t_min <= t_max <= 1.0:
        raise ValueError("need 0 < t_min <= t_max <= 1")
    h, w = img.shape[:2]
    ramp = np.linspace(t_min, t_max, h)[:, None]
    wiggle = ndimage.gaussian_filter(rng.standard_normal((h, w)), sigma=8.0) * 0.05
    t = np.clip(ramp + wiggle, t_min, t_max)
    if img.ndim == 3:
        t = t[..., None]
    return np.clip(img * t + airlight * (1.0 - t), 0.0, 1.0)


def hazy_scene_pair(height: int, width: int, sky_fraction: float,
                    rng: np.random.Generator):
    """(clear, hazy) pair for full-reference evaluation."""
    clear = make_scene(height, width, sky_fraction, rng)
    return clear, add_haze(clear, rng)
