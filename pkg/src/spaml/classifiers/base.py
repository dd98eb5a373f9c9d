from __future__ import annotations

from enum import Enum

import numpy as np
import scipy.sparse as sp

from ..vectorize import FeatureVector


class FitError(ValueError):
    """Bad training input or a diverged optimizer."""


class LearnerKind(str, Enum):
    MNB = "MNB"
    LR = "LR"
    SVM = "SVM"
    NCC = "NCC"
    GBT = "GBT"
    KNN = "KNN"
    PERCEPTRON = "Perceptron"


def as_matrix(X, dim: int | None = None) -> sp.csr_matrix:
    """Coerce rows of features to a finite float64 CSR matrix.

    Accepts a CSR/sparse matrix, a 2-D array, a list of equal-length rows, a
    single 1-D vector, a FeatureVector, or a list of FeatureVectors.
    """
    if isinstance(X, FeatureVector):
        M = X.tocsr()
    elif isinstance(X, (list, tuple)) and X and isinstance(X[0], FeatureVector):
        dims = {v.dim for v in X}
        if len(dims) != 1:
            raise FitError(f"feature vectors have mixed lengths {sorted(dims)}")
        M = sp.vstack([v.tocsr() for v in X], format="csr")
    elif sp.issparse(X):
        M = sp.csr_matrix(X, dtype=np.float64)
    else:
        try:
            arr = np.asarray(X, dtype=np.float64)
        except ValueError as exc:
            raise FitError(f"rows of X have inconsistent lengths: {exc}") from None
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2:
            raise FitError(f"X must be 2-D, got shape {arr.shape}")
        M = sp.csr_matrix(arr)
    if not np.all(np.isfinite(M.data)):
        raise FitError("X contains NaN or infinite values")
    if dim is not None and M.shape[1] != dim:
        raise FitError(f"expected vectors of length {dim}, got {M.shape[1]}")
    M.sum_duplicates()
    M.eliminate_zeros()
    M.sort_indices()
    return M


def as_labels(y, n_rows: int) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1 or len(y) != n_rows:
        raise FitError(f"expected {n_rows} labels, got shape {y.shape}")
    if not np.all(np.isin(y, (0, 1))):
        raise FitError("labels must be 0 (ham) or 1 (spam)")
    return y.astype(np.int64)


def check_training_set(X, y, *, need_both_classes: bool = True):
    M = as_matrix(X)
    labels = as_labels(y, M.shape[0])
    if M.shape[0] < 2:
        raise FitError("need at least two training examples")
    if need_both_classes and len(np.unique(labels)) < 2:
        raise FitError("training labels contain a single class; both ham and spam are required")
    return M, labels


def frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def floats(a) -> list:
    return np.asarray(a, dtype=np.float64).tolist()


class TrainedModel:
    """Shared predict plumbing; subclasses implement ``_predict_matrix``."""

    kind: LearnerKind

    @property
    def feature_dim(self) -> int:
        raise NotImplementedError

    def _predict_matrix(self, X: sp.csr_matrix) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X) -> np.ndarray:
        """Labels (0/1) for every row of ``X``."""
        return self._predict_matrix(as_matrix(X, self.feature_dim)).astype(np.int64)

    def predict_one(self, x) -> int:
        M = as_matrix(x, self.feature_dim)
        if M.shape[0] != 1:
            raise FitError(f"predict_one expects one vector, got {M.shape[0]}")
        return int(self._predict_matrix(M)[0])

    def to_dict(self) -> dict:
        raise NotImplementedError
