"""Estimator-style wrappers so the pipeline composes with sklearn tooling.

Both estimators are stateless transforms: ``fit`` validates parameters and
returns self, and parameters follow the get_params/set_params contract.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .edges import ALL_FILTERS
from .enhance import EnhanceConfig, enhance_dispatch
from .sky import SkyReport, detect_sky
from .thresholds import THRESHOLD_METHODS


def _is_single_image(X) -> bool:
    return isinstance(X, np.ndarray) and X.ndim in (2, 3)


class SkyDetector(BaseEstimator):
    """Image-global sky presence detector with a predict interface.

    ``predict`` accepts one image or a sequence of images and returns the
    decision string(s); ``report`` exposes the full pipeline output.
    """

    def __init__(self, filter_kind: str = "sdf", window: int = 15,
                 threshold_method: str = "otsu", tau_sky: float = 0.01,
                 homogeneity_gate: float = 0.1):
        self.filter_kind = filter_kind
        self.window = window
        self.threshold_method = threshold_method
        self.tau_sky = tau_sky
        self.homogeneity_gate = homogeneity_gate

    def _check_params(self) -> None:
        if self.filter_kind not in ALL_FILTERS:
            raise ValueError(f"unknown filter {self.filter_kind!r}")
        if self.threshold_method not in THRESHOLD_METHODS:
            raise ValueError(f"unknown threshold method {self.threshold_method!r}")

    def fit(self, X=None, y=None):
        self._check_params()
        return self

    def report(self, image) -> SkyReport:
        self._check_params()
        return detect_sky(image, self.filter_kind, self.window,
                          self.threshold_method, self.tau_sky,
                          self.homogeneity_gate)

    def predict(self, X):
        if _is_single_image(X):
            return self.report(X).decision
        return np.array([self.report(img).decision for img in X])


class HazeEnhancer(BaseEstimator, TransformerMixin):
    """Contrast enhancer exposed as a transformer over images.

    ``transform`` maps one image (or a sequence) to its enhanced version;
    ``enhance_with_report`` also returns the sky-detection report produced
    in sds mode.
    """

    def __init__(self, mode: str = "pa2", iterations: int = 118, dt: float = 0.2,
                 lambda_c: float = 1.0, lambda_d: float = 0.05,
                 contrast_k: float = 0.1, clahe_tiles: int = 8,
                 clahe_clip: float = 0.01, tau_sky: float = 0.01,
                 sdf_window: int = 15, sigma_frac: float = 0.1):
        self.mode = mode
        self.iterations = iterations
        self.dt = dt
        self.lambda_c = lambda_c
        self.lambda_d = lambda_d
        self.contrast_k = contrast_k
        self.clahe_tiles = clahe_tiles
        self.clahe_clip = clahe_clip
        self.tau_sky = tau_sky
        self.sdf_window = sdf_window
        self.sigma_frac = sigma_frac

    def config(self) -> EnhanceConfig:
        return EnhanceConfig(
            mode=self.mode, iterations=self.iterations, dt=self.dt,
            lambda_c=self.lambda_c, lambda_d=self.lambda_d,
            contrast_k=self.contrast_k, clahe_tiles=self.clahe_tiles,
            clahe_clip=self.clahe_clip, tau_sky=self.tau_sky,
            sdf_window=self.sdf_window, sigma_frac=self.sigma_frac,
        ).validate()

    def fit(self, X=None, y=None):
        self.config()
        return self

    def enhance_with_report(self, image):
        return enhance_dispatch(image, self.config())

    def transform(self, X):
        cfg = self.config()
        if _is_single_image(X):
            return enhance_dispatch(X, cfg)[0]
        return [enhance_dispatch(img, cfg)[0] for img in X]
