"""Multinomial naive Bayes with additive smoothing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import LearnerKind, TrainedModel, as_matrix, check_training_set, floats, frozen


@dataclass(frozen=True)
class MnbConfig:
    alpha: float = 0.1


@dataclass(frozen=True, eq=False)
class MnbModel(TrainedModel):
    # rows are classes (0 = ham, 1 = spam)
    log_prior: np.ndarray
    log_likelihood: np.ndarray

    kind = LearnerKind.MNB

    @property
    def feature_dim(self) -> int:
        return self.log_likelihood.shape[1]

    def scores(self, X) -> np.ndarray:
        """Per-class log scores ``log P(y_k) + sum_i x_i log P(x_i|y_k)``."""
        return np.asarray(X @ self.log_likelihood.T) + self.log_prior

    def _predict_matrix(self, X):
        s = self.scores(X)
        # equal scores resolve to ham
        return (s[:, 1] > s[:, 0]).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "log_prior": floats(self.log_prior),
            "log_likelihood": floats(self.log_likelihood),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MnbModel":
        return cls(frozen(d["log_prior"]), frozen(d["log_likelihood"]))


def mnb_fit(X, y, config: MnbConfig = MnbConfig()) -> MnbModel:
    """Estimate class priors and smoothed per-class term distributions.

    Feature values are treated as (possibly fractional) counts, so TF-IDF
    weights go through the same estimator as raw counts.
    """
    if config.alpha <= 0:
        raise ValueError(f"alpha must be positive, got {config.alpha}")
    X, y = check_training_set(X, y)
    if X.data.size and X.data.min() < 0:
        raise ValueError("multinomial naive Bayes needs non-negative features")
    class_counts = np.bincount(y, minlength=2).astype(np.float64)
    log_prior = np.log(class_counts / class_counts.sum())
    feature_totals = np.vstack(
        [np.asarray(X[y == k].sum(axis=0)).ravel() for k in (0, 1)]
    )
    smoothed = feature_totals + config.alpha
    log_likelihood = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    return MnbModel(frozen(log_prior), frozen(log_likelihood))


def mnb_posterior_scores(model: MnbModel, x) -> np.ndarray:
    return model.scores(as_matrix(x, model.feature_dim))[0]
