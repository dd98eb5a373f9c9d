"""Nearest-centroid classifier over per-class mean vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import LearnerKind, TrainedModel, as_matrix, check_training_set, floats, frozen


@dataclass(frozen=True)
class NccConfig:
    pass


@dataclass(frozen=True, eq=False)
class NccModel(TrainedModel):
    # row k is the mean training vector of class k
    centroids: np.ndarray

    kind = LearnerKind.NCC

    @property
    def feature_dim(self) -> int:
        return self.centroids.shape[1]

    def squared_distances(self, X) -> np.ndarray:
        X = as_matrix(X, self.feature_dim)
        x_sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
        cross = np.asarray(X @ self.centroids.T)
        c_sq = np.einsum("ij,ij->i", self.centroids, self.centroids)
        return np.maximum(x_sq[:, None] - 2.0 * cross + c_sq[None, :], 0.0)

    def _predict_matrix(self, X):
        d = self.squared_distances(X)
        # equidistant points go to ham
        return (d[:, 1] < d[:, 0]).astype(np.int64)

    def to_dict(self) -> dict:
        return {"centroids": floats(self.centroids)}

    @classmethod
    def from_dict(cls, d: dict) -> "NccModel":
        return cls(frozen(d["centroids"]))


def ncc_fit(X, y, config: NccConfig = NccConfig()) -> NccModel:
    X, y = check_training_set(X, y)
    centroids = np.vstack([np.asarray(X[y == k].mean(axis=0)).ravel() for k in (0, 1)])
    return NccModel(frozen(centroids))


def ncc_predict(model: NccModel, x) -> int:
    return model.predict_one(x)
