"""Linear learners sharing one parameter layout: logistic regression,
Pegasos hinge-loss SVM and the online perceptron."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .base import FitError, LearnerKind, TrainedModel, check_training_set, floats, frozen


@dataclass(frozen=True)
class LrConfig:
    # None picks 1/L, L being the Lipschitz constant of the loss gradient
    learning_rate: float | None = None
    epochs: int = 3000
    l2: float = 1e-4
    tol: float = 1e-6


@dataclass(frozen=True)
class SvmConfig:
    lam: float = 1e-4
    epochs: int = 10


@dataclass(frozen=True)
class PerceptronConfig:
    learning_rate: float = 0.1
    mse_threshold: float = 0.0
    max_epochs: int = 100

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("perceptron learning_rate must be > 0")
        if self.mse_threshold < 0:
            raise ValueError("perceptron mse_threshold must be >= 0")
        if self.max_epochs < 1:
            raise ValueError("perceptron max_epochs must be >= 1")


@dataclass(frozen=True, eq=False)
class LinearModel(TrainedModel):
    """``weights . x + bias``; LR squashes it through the sigmoid first."""

    kind: LearnerKind
    weights: np.ndarray
    bias: float
    converged: bool = False
    epochs_run: int = 0

    @property
    def feature_dim(self) -> int:
        return len(self.weights)

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X @ self.weights).ravel() + self.bias

    def probability(self, X) -> np.ndarray:
        return expit(self.decision_function(X))

    def _predict_matrix(self, X):
        if self.kind is LearnerKind.LR:
            return (self.probability(X) > 0.5).astype(np.int64)
        return (self.decision_function(X) > 0).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "weights": floats(self.weights),
            "bias": float(self.bias),
            "converged": self.converged,
            "epochs_run": self.epochs_run,
        }

    @classmethod
    def from_dict(cls, kind: LearnerKind, d: dict) -> "LinearModel":
        return cls(kind, frozen(d["weights"]), float(d["bias"]), bool(d["converged"]), int(d["epochs_run"]))


def sigmoid(z):
    return expit(z)


def logit(p):
    p = np.asarray(p, dtype=np.float64)
    return np.log(p) - np.log1p(-p)


def lr_loss_and_grad(weights, bias, X, y, l2):
    """Mean cross-entropy plus ``l2/2 * ||weights||^2`` and its gradient.

    The intercept is not penalized.
    """
    z = np.asarray(X @ weights).ravel() + bias
    loss = np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * float(weights @ weights)
    r = (expit(z) - y) / len(y)
    grad_w = np.asarray(X.T @ r).ravel() + l2 * weights
    grad_b = float(r.sum())
    return float(loss), grad_w, grad_b


def lipschitz_step(X, l2: float, iterations: int = 100) -> float:
    """``1/L`` for the mean cross-entropy gradient of ``[X, 1]``.

    ``L = sigma_max([X, 1])^2 / (4n) + l2``; the top eigenvalue of the Gram
    matrix comes from power iteration started at the all-ones vector, so the
    result is deterministic.
    """
    n, dim = X.shape
    v = np.full(dim + 1, 1.0 / np.sqrt(dim + 1))
    eig = 0.0
    for _ in range(iterations):
        u = np.asarray(X @ v[:-1]).ravel() + v[-1]
        w = np.r_[np.asarray(X.T @ u).ravel(), u.sum()]
        eig = float(np.linalg.norm(w))
        if eig == 0.0:
            break
        v = w / eig
    return 1.0 / (eig / (4.0 * n) + l2) if eig + l2 > 0 else 1.0


def lr_fit_gd(X, y, config: LrConfig = LrConfig()) -> LinearModel:
    """Full-batch gradient descent on the L2-penalized mean cross-entropy.

    Stops after ``config.epochs`` steps or once every gradient component is
    below ``config.tol``.
    """
    X, y = check_training_set(X, y)
    yf = y.astype(np.float64)
    w = np.zeros(X.shape[1])
    b = 0.0
    rate = config.learning_rate
    if rate is None:
        rate = lipschitz_step(X, config.l2)
    elif rate <= 0:
        raise ValueError(f"learning_rate must be positive, got {rate}")
    converged = False
    epoch = 0
    # overflow shows up as a non-finite loss, reported below as FitError
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(1, config.epochs + 1):
            loss, gw, gb = lr_loss_and_grad(w, b, X, yf, config.l2)
            if not np.isfinite(loss):
                raise FitError(
                    f"logistic regression diverged at epoch {epoch}; lower the learning rate"
                )
            if max(np.max(np.abs(gw), initial=0.0), abs(gb)) < config.tol:
                converged = True
                break
            w -= rate * gw
            b -= rate * gb
    if not (np.all(np.isfinite(w)) and np.isfinite(b)):
        raise FitError("logistic regression produced non-finite weights; lower the learning rate")
    return LinearModel(LearnerKind.LR, frozen(w), float(b), converged, epoch)


def svm_objective(weights, bias, X, y_pm, lam) -> float:
    """``lam/2 * ||(w, b)||^2 + mean hinge`` with labels in {-1, +1}."""
    margins = y_pm * (np.asarray(X @ weights).ravel() + bias)
    hinge = np.maximum(0.0, 1.0 - margins).mean()
    return 0.5 * lam * (float(weights @ weights) + bias * bias) + float(hinge)


def svm_fit_sgd(X, y, config: SvmConfig = SvmConfig(), seed: int = 0) -> LinearModel:
    """Pegasos: stochastic sub-gradient steps of size ``1/(lam*t)``.

    The bias is folded in as a constant feature and so shares the L2 penalty.
    With that step size ``t * w_{t+1} = (t-1) * w_t + [violated] * y x / lam``,
    so we accumulate the unscaled sum and divide once per step instead of
    shrinking the whole weight vector.
    """
    if config.lam <= 0:
        raise ValueError(f"lam must be positive, got {config.lam}")
    X, y = check_training_set(X, y)
    y_pm = np.where(y == 1, 1.0, -1.0)
    n, dim = X.shape
    rng = np.random.default_rng(seed)
    indptr, indices, data = X.indptr, X.indices, X.data
    acc = np.zeros(dim)
    acc_b = 0.0
    step = 1.0 / config.lam
    t = 0
    for _ in range(config.epochs):
        for i in rng.permutation(n):
            t += 1
            lo, hi = indptr[i], indptr[i + 1]
            idx = indices[lo:hi]
            vals = data[lo:hi]
            yi = y_pm[i]
            # w_t = acc / (t - 1); w_1 = 0
            score = (acc[idx] @ vals + acc_b) / (t - 1) if t > 1 else 0.0
            if yi * score < 1.0:
                acc[idx] += (yi * step) * vals
                acc_b += yi * step
    t = max(t, 1)
    w = acc / t
    b = acc_b / t
    if not (np.all(np.isfinite(w)) and np.isfinite(b)):
        raise FitError("SVM training produced non-finite weights")
    return LinearModel(LearnerKind.SVM, frozen(w), float(b), False, config.epochs)


def perceptron_activation(score: float) -> int:
    # strict inequality: a zero score is class 0
    return 1 if score > 0.0 else 0


def perceptron_update(weights, bias, x, target, predicted, learning_rate):
    """One step of the update rule; returns new (weights, bias)."""
    delta = learning_rate * (target - predicted)
    return weights + delta * np.asarray(x, dtype=np.float64), bias + delta


def perceptron_fit(X, y, config: PerceptronConfig = PerceptronConfig(), seed: int = 0) -> LinearModel:
    """Online perceptron over the rows in their given order.

    After each pass the mean squared error of that pass's online predictions
    is compared with ``mse_threshold``; training stops once it drops below
    the threshold, or reaches zero (the only reachable stop when the
    threshold is 0), or after ``max_epochs`` passes. ``seed`` is accepted for
    interface symmetry; the iteration order is fixed.
    """
    X, y = check_training_set(X, y)
    n, dim = X.shape
    indptr, indices, data = X.indptr, X.indices, X.data
    w = np.zeros(dim)
    b = 0.0
    rho = config.learning_rate
    converged = False
    epoch = 0
    for epoch in range(1, config.max_epochs + 1):
        errors = 0
        for i in range(n):
            lo, hi = indptr[i], indptr[i + 1]
            idx = indices[lo:hi]
            vals = data[lo:hi]
            predicted = perceptron_activation(w[idx] @ vals + b)
            diff = y[i] - predicted
            if diff:
                errors += 1
                w[idx] += (rho * diff) * vals
                b += rho * diff
        mse = errors / n
        if mse < config.mse_threshold or mse == 0.0:
            converged = True
            break
    return LinearModel(LearnerKind.PERCEPTRON, frozen(w), float(b), converged, epoch)
