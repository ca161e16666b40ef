"""Exact k-nearest-neighbour lookup over a fixed training matrix."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateData, KTooLarge
from . import _kernels


class KnnIndex:
    """Brute-force euclidean index; ties resolve to the lower row id."""

    def __init__(self):
        self.points_ = None

    def fit(self, x: np.ndarray) -> "KnnIndex":
        x = np.ascontiguousarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[0] == 0:
            raise DegenerateData("knn index needs a nonempty 2-d matrix")
        if not np.isfinite(x).all():
            raise DegenerateData("knn index requires finite features")
        self.points_ = x
        return self

    @property
    def n_points(self) -> int:
        if self.points_ is None:
            raise DegenerateData("knn index used before fit")
        return self.points_.shape[0]

    def query(self, x: np.ndarray, k: int) -> np.ndarray:
        """Row ids of the k nearest points per query row, nearest first."""
        if self.points_ is None:
            raise DegenerateData("knn index used before fit")
        if k < 1 or k > self.n_points:
            raise KTooLarge(f"k={k} outside [1, {self.n_points}]")
        x = np.ascontiguousarray(x, dtype=np.float64)
        one_row = x.ndim == 1
        if one_row:
            x = x[None, :]
        dists = _kernels.pairwise_sq_dists(x, self.points_)
        # stable sort: equal distances keep ascending row id
        order = np.argsort(dists, axis=1, kind="stable")[:, :k]
        return order[0] if one_row else order
