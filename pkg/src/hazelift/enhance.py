"""Contrast enhancement engine.

The value channel of a hazy image is decomposed into illumination and
reflectance in the log domain (``ir_decompose``), then evolved under an
iterative update that combines a CLAHE attachment term with edge-preserving
diffusion (``pde_enhance``):

    u <- clamp( u + dt * [ lambda_c (CLAHE(u0) - u) + lambda_d div(g(|grad u|) grad u) ] )
    g(s) = 1 / (1 + (s/K)^2)

``enhance_dispatch`` selects what to evolve:

* ``pa2``      - the full value channel;
* ``pa2-sds``  - run sky detection first; when sky is present only the
  reflectance is enhanced and the illumination (which carries the sky) is
  re-applied untouched, which avoids over-enhancing flat sky regions;
* ``pa2-lir``  - raise the whole log-illumination field to its maximum before
  enhancing (a cheaper, more aggressive alternative that can fade colours).

Hue and saturation are never touched: only V of the HSV representation is
modified, so the output hue matches the input per pixel.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np
from scipy import ndimage

from .image import check_gray, check_image, hsv_to_rgb, rgb_to_hsv
from .sky import SkyReport, detect_sky

LOG_FLOOR = 1.0 / 255.0

MODES = ("pa2", "pa2-sds", "pa2-lir")


@dataclass(frozen=True)
class EnhanceConfig:
    """Knobs of the enhancement engine; defaults are the production values."""

    mode: str = "pa2"
    iterations: int = 118
    dt: float = 0.2
    lambda_c: float = 1.0
    lambda_d: float = 0.05
    contrast_k: float = 0.1
    clahe_tiles: int = 8
    clahe_clip: float = 0.01
    tau_sky: float = 0.01
    sdf_window: int = 15
    sigma_frac: float = 0.1

    def validate(self) -> "EnhanceConfig":
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.lambda_c < 0 or self.lambda_d < 0:
            raise ValueError("weights must be non-negative")
        if self.dt * self.lambda_c > 1.0:
            raise ValueError("unstable attachment step: dt * lambda_c must be <= 1")
        if self.contrast_k <= 0:
            raise ValueError("contrast_k must be positive")
        if self.clahe_tiles < 1:
            raise ValueError("clahe_tiles must be >= 1")
        if not 0.0 < self.clahe_clip <= 1.0:
            raise ValueError("clahe_clip must lie in (0, 1]")
        if self.tau_sky < 0:
            raise ValueError("tau_sky must be non-negative")
        if not 0.0 < self.sigma_frac <= 1.0:
            raise ValueError("sigma_frac must lie in (0, 1]")
        return self

    def to_file(self, path) -> None:
        lines = [f"{f.name}={getattr(self, f.name)}" for f in fields(self)]
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def from_file(cls, path, **defaults) -> "EnhanceConfig":
        """Parse a flat key=value file; unknown keys are rejected.

        ``defaults`` seed keys not present in the file (file values win, so a
        config file overrides command-line flags passed through here).
        """
        known = {f.name for f in fields(cls)}
        values = dict(defaults)
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {lineno}: expected key=value, got {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in known:
                raise ValueError(f"{path}: line {lineno}: unknown key {key!r}")
            values[key] = value.strip()
        for key in ("iterations", "clahe_tiles", "sdf_window"):
            if key in values:
                values[key] = int(values[key])
        for key in ("dt", "lambda_c", "lambda_d", "contrast_k", "clahe_clip",
                    "tau_sky", "sigma_frac"):
            if key in values:
                values[key] = float(values[key])
        return cls(**values).validate()

    def with_mode(self, mode: str) -> "EnhanceConfig":
        return replace(self, mode=mode).validate()


@dataclass(frozen=True)
class IrDecomposition:
    """Log-domain illumination / reflectance split: log_l + log_r = log(max(V, eps))."""

    log_l: np.ndarray
    log_r: np.ndarray
    epsilon: float = LOG_FLOOR


def ir_decompose(v: np.ndarray, sigma_frac: float = 0.1) -> IrDecomposition:
    """Estimate illumination as a wide Gaussian blur of log(max(V, eps)).

    sigma = sigma_frac * min(height, width); the reflectance is the log
    residual, so the additive identity holds exactly by construction.
    """
    v = check_gray(v)
    if not 0.0 < sigma_frac <= 1.0:
        raise ValueError("sigma_frac must lie in (0, 1]")
    log_v = np.log(np.maximum(v, LOG_FLOOR))
    sigma = sigma_frac * min(v.shape)
    log_l = ndimage.gaussian_filter(log_v, sigma=sigma, mode="nearest")
    return IrDecomposition(log_l=log_l, log_r=log_v - log_l)


def lir_refine(d: IrDecomposition) -> IrDecomposition:
    """Raise every log-illumination pixel to the field's maximum.

    The refined field is constant, so the operation is idempotent; the
    reflectance is left untouched.
    """
    peak = float(d.log_l.max())
    return IrDecomposition(log_l=np.full_like(d.log_l, peak), log_r=d.log_r,
                           epsilon=d.epsilon)


def _tile_edges(size: int, tiles: int) -> np.ndarray:
    return np.linspace(0, size, tiles + 1).round().astype(int)


def _axis_interp(size: int, edges: np.ndarray, tiles: int):
    """Per-pixel lower tile index and blend weight along one axis."""
    centers = (edges[:-1] + edges[1:] - 1) / 2.0
    coords = np.arange(size, dtype=np.float64)
    if tiles == 1:
        return np.zeros(size, dtype=np.int64), np.zeros(size)
    idx = np.clip(np.searchsorted(centers, coords) - 1, 0, tiles - 2)
    weight = np.clip((coords - centers[idx]) / (centers[idx + 1] - centers[idx]), 0.0, 1.0)
    return idx, weight


def clahe(g: np.ndarray, tiles: int = 8, clip: float = 0.01) -> np.ndarray:
    """Contrast-limited adaptive histogram equalization on a [0, 1] image.

    Per-tile 256-bin histograms are clipped at ``clip`` times the tile pixel
    count, the excess is redistributed uniformly, and each tile maps a value
    to its clipped CDF position. Mappings are blended bilinearly between tile
    centers. A tile whose histogram occupies a single bin maps values to
    themselves, so constant images pass through unchanged.
    """
    g = check_gray(g)
    tiles = int(tiles)
    if tiles < 1:
        raise ValueError("tiles must be >= 1")
    if not 0.0 < clip <= 1.0:
        raise ValueError("clip must lie in (0, 1]")
    h, w = g.shape
    if h < tiles or w < tiles:
        raise ValueError(f"image {g.shape} smaller than the {tiles}x{tiles} tile grid")

    ey = _tile_edges(h, tiles)
    ex = _tile_edges(w, tiles)
    bins = np.minimum((g * 256).astype(np.int64), 255)

    lut = np.zeros((tiles, tiles, 256))
    degenerate = np.zeros((tiles, tiles), dtype=bool)
    for i in range(tiles):
        for j in range(tiles):
            tile_bins = bins[ey[i]:ey[i + 1], ex[j]:ex[j + 1]]
            count = tile_bins.size
            hist = np.bincount(tile_bins.ravel(), minlength=256).astype(np.float64)
            if (hist > 0).sum() <= 1:
                degenerate[i, j] = True
                continue
            limit = clip * count
            excess = np.maximum(hist - limit, 0.0).sum()
            hist = np.minimum(hist, limit) + excess / 256.0
            lut[i, j] = np.cumsum(hist) / count

    iy, wy = _axis_interp(h, ey, tiles)
    ix, wx = _axis_interp(w, ex, tiles)
    row_idx, col_idx = np.meshgrid(iy, ix, indexing="ij")
    row_w, col_w = np.meshgrid(wy, wx, indexing="ij")

    def corner(dy: int, dx: int) -> np.ndarray:
        ti = np.minimum(row_idx + dy, tiles - 1)
        tj = np.minimum(col_idx + dx, tiles - 1)
        return np.where(degenerate[ti, tj], g, lut[ti, tj, bins])

    v00, v01, v10, v11 = corner(0, 0), corner(0, 1), corner(1, 0), corner(1, 1)
    # lerp form keeps equal corner mappings exact (constant image -> identity)
    top = v00 + col_w * (v01 - v00)
    bottom = v10 + col_w * (v11 - v10)
    # the blend can overshoot the unit range by an ulp
    return np.clip(top + row_w * (bottom - top), 0.0, 1.0)


def pde_enhance(u0: np.ndarray, cfg: EnhanceConfig) -> np.ndarray:
    """Evolve ``u0`` for exactly cfg.iterations steps toward its CLAHE target
    under edge-preserving diffusion; every iterate is clamped to [0, 1].

    Gradients use central differences, the divergence the standard 4-neighbor
    flux form with replicate borders (zero flux across the edge). The update
    is Jacobi-style from the previous iterate only, so results are
    deterministic regardless of internal evaluation order.
    """
    u0 = check_gray(u0)
    cfg.validate()
    target = clahe(u0, cfg.clahe_tiles, cfg.clahe_clip)
    u = u0.copy()
    k2 = cfg.contrast_k * cfg.contrast_k
    for _ in range(cfg.iterations):
        p = np.pad(u, 1, mode="edge")
        gx = (p[1:-1, 2:] - p[1:-1, :-2]) / 2.0
        gy = (p[2:, 1:-1] - p[:-2, 1:-1]) / 2.0
        g = 1.0 / (1.0 + (gx * gx + gy * gy) / k2)
        gp = np.pad(g, 1, mode="edge")
        div = np.zeros_like(u)
        for sy, sx in ((0, 1), (0, -1), (1, 0), (-1, 0)):
            u_n = p[1 + sy:p.shape[0] - 1 + sy, 1 + sx:p.shape[1] - 1 + sx]
            g_n = gp[1 + sy:gp.shape[0] - 1 + sy, 1 + sx:gp.shape[1] - 1 + sx]
            div += 0.5 * (g + g_n) * (u_n - u)
        u = np.clip(u + cfg.dt * (cfg.lambda_c * (target - u) + cfg.lambda_d * div),
                    0.0, 1.0)
    return u


def _enhance_value(v: np.ndarray, cfg: EnhanceConfig, img) -> tuple[np.ndarray, SkyReport | None]:
    def plain() -> np.ndarray:
        return pde_enhance(np.maximum(v, LOG_FLOOR), cfg)

    if cfg.mode == "pa2":
        return plain(), None

    if cfg.mode == "pa2-sds":
        report = detect_sky(img, "sdf", cfg.sdf_window, "otsu", cfg.tau_sky)
        if not report.is_sky:
            return plain(), report
        decomp = ir_decompose(v, cfg.sigma_frac)
        illum = np.exp(decomp.log_l)
        refl = np.exp(decomp.log_r)
        enhanced = pde_enhance(np.minimum(refl, 1.0), cfg)
        product = enhanced * illum
        peak = float(product.max())
        if peak > 1.0:
            product = product / peak
        return product, report

    refined = lir_refine(ir_decompose(v, cfg.sigma_frac))
    v_ref = np.exp(refined.log_l + refined.log_r)
    peak = float(v_ref.max())
    if peak > 1.0:
        v_ref = v_ref / peak
    return pde_enhance(v_ref, cfg), None


def enhance_dispatch(img: np.ndarray, cfg: EnhanceConfig) -> tuple[np.ndarray, SkyReport | None]:
    """Enhance a gray or RGB image according to cfg.mode.

    RGB images are processed on the HSV value channel and recombined with the
    original hue and saturation; single-channel images are processed directly.
    Returns the enhanced image and, in sds mode, the detection report.
    """
    img = check_image(img)
    cfg.validate()
    if img.ndim == 2:
        return _enhance_value(img, cfg, img)
    hsv = rgb_to_hsv(img)
    v_out, report = _enhance_value(hsv[..., 2], cfg, img)
    out = hsv.copy()
    out[..., 2] = v_out
    return hsv_to_rgb(out), report
