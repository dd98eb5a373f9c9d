"""Seven base learners behind one fit/predict contract."""

from __future__ import annotations

from .base import FitError, LearnerKind, TrainedModel, as_matrix
from .gbt import GbtConfig, GbtModel, gbt_fit
from .knn import KnnConfig, KnnModel, knn_distance, knn_fit, knn_predict
from .linear import (
    LinearModel,
    LrConfig,
    PerceptronConfig,
    SvmConfig,
    lr_fit_gd,
    perceptron_fit,
    svm_fit_sgd,
)
from .mnb import MnbConfig, MnbModel, mnb_fit, mnb_posterior_scores
from .ncc import NccConfig, NccModel, ncc_fit, ncc_predict

CONFIG_TYPES = {
    LearnerKind.MNB: MnbConfig,
    LearnerKind.LR: LrConfig,
    LearnerKind.SVM: SvmConfig,
    LearnerKind.NCC: NccConfig,
    LearnerKind.GBT: GbtConfig,
    LearnerKind.KNN: KnnConfig,
    LearnerKind.PERCEPTRON: PerceptronConfig,
}


def fit(kind: LearnerKind | str, X, y, config=None, seed: int = 0) -> TrainedModel:
    """Train one learner of the given kind; ``config`` defaults per kind."""
    kind = LearnerKind(kind)
    if config is None:
        config = CONFIG_TYPES[kind]()
    elif not isinstance(config, CONFIG_TYPES[kind]):
        raise TypeError(f"{kind.value} expects {CONFIG_TYPES[kind].__name__}, got {type(config).__name__}")
    if kind is LearnerKind.MNB:
        return mnb_fit(X, y, config)
    if kind is LearnerKind.LR:
        return lr_fit_gd(X, y, config)
    if kind is LearnerKind.SVM:
        return svm_fit_sgd(X, y, config, seed)
    if kind is LearnerKind.NCC:
        return ncc_fit(X, y, config)
    if kind is LearnerKind.GBT:
        return gbt_fit(X, y, config)
    if kind is LearnerKind.KNN:
        return knn_fit(X, y, config)
    return perceptron_fit(X, y, config, seed)


def predict(model: TrainedModel, x) -> int:
    """Label (0 ham, 1 spam) of a single feature vector."""
    return model.predict_one(x)


def model_from_dict(kind: LearnerKind | str, d: dict) -> TrainedModel:
    kind = LearnerKind(kind)
    if kind in (LearnerKind.LR, LearnerKind.SVM, LearnerKind.PERCEPTRON):
        return LinearModel.from_dict(kind, d)
    return {
        LearnerKind.MNB: MnbModel,
        LearnerKind.NCC: NccModel,
        LearnerKind.GBT: GbtModel,
        LearnerKind.KNN: KnnModel,
    }[kind].from_dict(d)


__all__ = [
    "CONFIG_TYPES",
    "FitError",
    "GbtConfig",
    "GbtModel",
    "KnnConfig",
    "KnnModel",
    "LearnerKind",
    "LinearModel",
    "LrConfig",
    "MnbConfig",
    "MnbModel",
    "NccConfig",
    "NccModel",
    "PerceptronConfig",
    "SvmConfig",
    "TrainedModel",
    "as_matrix",
    "fit",
    "gbt_fit",
    "knn_distance",
    "knn_fit",
    "knn_predict",
    "lr_fit_gd",
    "mnb_fit",
    "mnb_posterior_scores",
    "model_from_dict",
    "ncc_fit",
    "ncc_predict",
    "perceptron_fit",
    "predict",
    "svm_fit_sgd",
]
