"""Fuzzy c-means clustering for one-dimensional ratio collections.

Standard alternating updates: memberships u_ik = 1 / sum_j (d_ik / d_jk)^(2/(m-1)),
centers as the u^m-weighted means. Initialization spreads the centers evenly
between the data minimum and maximum (min and max themselves for c = 2), so
runs are deterministic without a seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

try:
    from sklearn.base import BaseEstimator, ClusterMixin
except ImportError:  # estimator wrapper degrades gracefully without sklearn
    BaseEstimator = object

    class ClusterMixin:
        def fit_predict(self, X, y=None):
            return self.fit(X).labels_


@dataclass(frozen=True)
class FcmResult:
    """Converged clustering state.

    memberships rows sum to 1; labels are the per-point argmax; objective is
    the final J_m and objective_history records J_m after every iteration.
    """

    centers: np.ndarray
    memberships: np.ndarray
    labels: np.ndarray
    objective: float
    objective_history: list = field(default_factory=list)
    n_iter: int = 0


def _memberships(x: np.ndarray, centers: np.ndarray, m: float) -> np.ndarray:
    d = np.abs(x[:, None] - centers[None, :])
    u = np.zeros((x.size, centers.size))
    # points sitting on a center (or close enough to overflow the inverse
    # power) get their membership concentrated there
    on_center = d == 0.0
    with np.errstate(divide="ignore", over="ignore"):
        inv = d ** (-2.0 / (m - 1.0))
    on_center |= np.isinf(inv)
    hit = on_center.any(axis=1)
    if hit.any():
        z = on_center[hit]
        u[hit] = z / z.sum(axis=1, keepdims=True)
    free = ~hit
    if free.any():
        u[free] = inv[free] / inv[free].sum(axis=1, keepdims=True)
    return u


def fcm_cluster(points, c: int = 2, m: float = 2.0, tol: float = 1e-6,
                max_iter: int = 200) -> FcmResult:
    """Cluster scalar values into ``c`` fuzzy groups.

    Terminates when the largest membership change drops below ``tol``. The
    objective J_m = sum u^m d^2 is non-increasing across iterations.
    """
    x = np.asarray(points, dtype=np.float64).ravel()
    if c < 2:
        raise ValueError("need at least 2 clusters")
    if x.size < c:
        raise ValueError(f"need at least {c} points, got {x.size}")
    if m <= 1.0:
        raise ValueError("fuzzifier m must exceed 1")

    centers = np.linspace(x.min(), x.max(), c)
    u = np.full((x.size, c), 1.0 / c)
    history: list[float] = []
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        u_new = _memberships(x, centers, m)
        um = u_new ** m
        denom = um.sum(axis=0)
        centers = np.where(denom > 0, (um * x[:, None]).sum(axis=0) / np.where(denom > 0, denom, 1.0), centers)
        d = np.abs(x[:, None] - centers[None, :])
        history.append(float((um * d * d).sum()))
        change = float(np.abs(u_new - u).max())
        u = u_new
        if change < tol:
            break
    return FcmResult(
        centers=centers,
        memberships=u,
        labels=u.argmax(axis=1),
        objective=history[-1],
        objective_history=history,
        n_iter=n_iter,
    )


class FuzzyCMeans(BaseEstimator, ClusterMixin):
    """Estimator-style wrapper around :func:`fcm_cluster` for scalar features.

    Parameters mirror the functional interface; after ``fit`` the fitted state
    lives in ``cluster_centers_``, ``membership_``, ``labels_``,
    ``objective_`` and ``n_iter_``.
    """

    def __init__(self, n_clusters: int = 2, m: float = 2.0, tol: float = 1e-6,
                 max_iter: int = 200):
        self.n_clusters = n_clusters
        self.m = m
        self.tol = tol
        self.max_iter = max_iter

    @staticmethod
    def _as_scalar_features(X) -> np.ndarray:
        arr = np.asarray(X, dtype=np.float64)
        if arr.ndim == 2 and arr.shape[1] == 1:
            arr = arr[:, 0]
        if arr.ndim != 1:
            raise ValueError("FuzzyCMeans handles a single scalar feature; "
                             f"got array of shape {arr.shape}")
        return arr

    def fit(self, X, y=None):
        x = self._as_scalar_features(X)
        result = fcm_cluster(x, c=self.n_clusters, m=self.m, tol=self.tol,
                             max_iter=self.max_iter)
        self.cluster_centers_ = result.centers
        self.membership_ = result.memberships
        self.labels_ = result.labels
        self.objective_ = result.objective
        self.n_iter_ = result.n_iter
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "cluster_centers_"):
            raise ValueError("FuzzyCMeans instance is not fitted yet")
        x = self._as_scalar_features(X)
        return _memberships(x, self.cluster_centers_, self.m).argmax(axis=1)
