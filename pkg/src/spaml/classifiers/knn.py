"""Brute-force k-nearest-neighbors with five distance metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .base import FitError, LearnerKind, TrainedModel, as_matrix, check_training_set, floats

METRICS = ("euclidean", "manhattan", "minkowski", "chebyshev", "canberra")

# distances equal to this many decimals count as tied; the sparse kernel sums
# terms in a different order than a plain scan, so exact float equality
# would make tie-breaking depend on rounding noise
TIE_DECIMALS = 9


@dataclass(frozen=True)
class KnnConfig:
    k: int = 5
    metric: str = "euclidean"
    p: float = 2.0

    def __post_init__(self):
        if self.k < 1 or self.k % 2 == 0:
            raise ValueError(f"k must be a positive odd number, got {self.k}")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; choose from {', '.join(METRICS)}")
        if self.metric == "minkowski" and self.p < 1:
            raise ValueError(f"minkowski needs p >= 1, got {self.p}")


def knn_distance(a, b, metric: str = "euclidean", p: float = 2.0) -> float:
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"vectors differ in length: {a.shape[0]} vs {b.shape[0]}")
    diff = np.abs(a - b)
    if metric == "euclidean":
        return float(np.sqrt(np.sum(diff**2)))
    if metric == "manhattan":
        return float(np.sum(diff))
    if metric == "minkowski":
        if p < 1:
            raise ValueError(f"minkowski needs p >= 1, got {p}")
        return float(np.sum(diff**p) ** (1.0 / p))
    if metric == "chebyshev":
        return float(diff.max(initial=0.0))
    if metric == "canberra":
        denom = np.abs(a) + np.abs(b)
        return float(np.sum(np.divide(diff, denom, out=np.zeros_like(diff), where=denom > 0)))
    raise ValueError(f"unknown metric {metric!r}")


def _term(a, b, metric, p):
    """Per-coordinate contribution before the final reduction/root."""
    d = np.abs(a - b)
    if metric == "euclidean":
        return d * d
    if metric in ("manhattan", "chebyshev"):
        return d
    if metric == "minkowski":
        return d**p
    denom = np.abs(a) + np.abs(b)
    return np.divide(d, denom, out=np.zeros_like(d), where=denom > 0)


def pairwise_distances(Q: sp.csr_matrix, X: sp.csc_matrix, metric: str, p: float = 2.0) -> np.ndarray:
    """Distances from each row of ``Q`` to each row of ``X``.

    Coordinates where both vectors are zero contribute nothing, so for each
    query the memorized rows are split into the query's support (a dense
    block) and the rest (precomputed per-row totals of ``|x|``-terms).
    """
    X = sp.csc_matrix(X)
    n = X.shape[0]
    absX = abs(X)
    if metric == "chebyshev":
        base = None
    elif metric == "canberra":
        base = np.diff(sp.csr_matrix(X).indptr).astype(np.float64)
    else:
        base = np.asarray(_elementwise(absX, metric, p).sum(axis=1)).ravel()

    Q = sp.csr_matrix(Q)
    out = np.empty((Q.shape[0], n))
    for qi in range(Q.shape[0]):
        lo, hi = Q.indptr[qi], Q.indptr[qi + 1]
        cols = Q.indices[lo:hi]
        qv = Q.data[lo:hi]
        block = X[:, cols].toarray() if len(cols) else np.zeros((n, 0))
        inside = _term(block, qv[None, :], metric, p)
        if metric == "chebyshev":
            rest = absX.tocsr(copy=True)
            if len(cols):
                mask = np.zeros(X.shape[1], dtype=bool)
                mask[cols] = True
                keep = ~mask[rest.indices]
                rest.data = rest.data * keep
            outside = np.asarray(rest.max(axis=1).toarray()).ravel()
            out[qi] = np.maximum(outside, inside.max(axis=1, initial=0.0))
            continue
        at_zero = _term(block, 0.0, metric, p)
        total = base - at_zero.sum(axis=1) + inside.sum(axis=1)
        out[qi] = np.maximum(total, 0.0)
    if metric == "euclidean":
        np.sqrt(out, out=out)
    elif metric == "minkowski":
        np.power(out, 1.0 / p, out=out)
    return out


def _elementwise(absX: sp.csc_matrix, metric, p):
    M = absX.copy()
    if metric == "euclidean":
        M.data = M.data**2
    elif metric == "minkowski":
        M.data = M.data**p
    return M


@dataclass(frozen=True, eq=False)
class KnnModel(TrainedModel):
    memorized: sp.csr_matrix
    labels: np.ndarray
    k: int
    metric: str
    p: float = 2.0

    kind = LearnerKind.KNN

    @property
    def feature_dim(self) -> int:
        return self.memorized.shape[1]

    def neighbors(self, X) -> np.ndarray:
        """Indices of the ``k`` nearest memorized rows, nearest first.

        Distances equal to ``TIE_DECIMALS`` places keep the lower memorized
        index first.
        """
        d = pairwise_distances(X, self._csc, self.metric, self.p)
        return np.argsort(np.round(d, TIE_DECIMALS), axis=1, kind="stable")[:, : self.k]

    @property
    def _csc(self):
        cached = self.__dict__.get("_csc_cache")
        if cached is None:
            cached = sp.csc_matrix(self.memorized)
            object.__setattr__(self, "_csc_cache", cached)
        return cached

    def _predict_matrix(self, X):
        votes = self.labels[self.neighbors(X)].sum(axis=1)
        return (2 * votes > self.k).astype(np.int64)

    def to_dict(self) -> dict:
        m = self.memorized
        return {
            "k": self.k,
            "metric": self.metric,
            "p": float(self.p),
            "shape": list(m.shape),
            "indptr": m.indptr.tolist(),
            "indices": m.indices.tolist(),
            "data": floats(m.data),
            "labels": self.labels.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "KnnModel":
        m = sp.csr_matrix(
            (np.asarray(d["data"], dtype=np.float64), np.asarray(d["indices"], dtype=np.int32),
             np.asarray(d["indptr"], dtype=np.int32)),
            shape=tuple(d["shape"]),
        )
        labels = np.asarray(d["labels"], dtype=np.int64)
        labels.setflags(write=False)
        return cls(m, labels, int(d["k"]), d["metric"], float(d["p"]))


def knn_fit(X, y, config: KnnConfig = KnnConfig()) -> KnnModel:
    """Memorize the training set. A single-class set is allowed (then every
    prediction is that class)."""
    X, y = check_training_set(X, y, need_both_classes=False)
    if config.k > X.shape[0]:
        raise FitError(f"k={config.k} exceeds the {X.shape[0]} memorized examples")
    y = y.copy()
    y.setflags(write=False)
    return KnnModel(X, y, config.k, config.metric, float(config.p))


def knn_predict(model: KnnModel, x) -> int:
    return model.predict_one(as_matrix(x, model.feature_dim))
