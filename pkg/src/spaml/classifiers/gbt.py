"""Second-order gradient boosted regression trees under logistic loss."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from .base import LearnerKind, TrainedModel, check_training_set, floats


@dataclass(frozen=True)
class GbtConfig:
    n_trees: int = 50
    max_depth: int = 3
    shrinkage: float = 0.3
    reg_lambda: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.n_trees < 0 or self.max_depth < 0:
            raise ValueError("n_trees and max_depth must be non-negative")
        if self.reg_lambda < 0 or self.gamma < 0:
            raise ValueError("reg_lambda and gamma must be non-negative")


@dataclass(frozen=True)
class Tree:
    """Array-encoded binary tree; ``feature[n] == -1`` marks a leaf.

    A row goes left at node ``n`` when ``x[feature[n]] < threshold[n]``.
    """

    feature: tuple[int, ...]
    threshold: tuple[float, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]
    value: tuple[float, ...]
    gain: tuple[float, ...]

    def depth(self, node: int = 0) -> int:
        if self.feature[node] < 0:
            return 0
        return 1 + max(self.depth(self.left[node]), self.depth(self.right[node]))

    def predict(self, X) -> np.ndarray:
        out = np.empty(X.shape[0])
        if not sp.isspmatrix_csc(X):
            X = sp.csc_matrix(X)
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, rows = stack.pop()
            f = self.feature[node]
            if f < 0:
                out[rows] = self.value[node]
                continue
            col = X[rows, f].toarray().ravel()
            go_left = col < self.threshold[node]
            stack.append((self.left[node], rows[go_left]))
            stack.append((self.right[node], rows[~go_left]))
        return out

    def to_dict(self) -> dict:
        return {
            "feature": list(self.feature),
            "threshold": floats(self.threshold),
            "left": list(self.left),
            "right": list(self.right),
            "value": floats(self.value),
            "gain": floats(self.gain),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        return cls(
            tuple(int(v) for v in d["feature"]),
            tuple(float(v) for v in d["threshold"]),
            tuple(int(v) for v in d["left"]),
            tuple(int(v) for v in d["right"]),
            tuple(float(v) for v in d["value"]),
            tuple(float(v) for v in d["gain"]),
        )


@dataclass(frozen=True, eq=False)
class GbtModel(TrainedModel):
    trees: tuple[Tree, ...]
    shrinkage: float
    base_score: float
    n_features: int
    train_loss: tuple[float, ...] = ()

    kind = LearnerKind.GBT

    @property
    def feature_dim(self) -> int:
        return self.n_features

    def raw_score(self, X) -> np.ndarray:
        score = np.full(X.shape[0], self.base_score)
        X = sp.csc_matrix(X)
        for tree in self.trees:
            score += self.shrinkage * tree.predict(X)
        return score

    def _predict_matrix(self, X):
        return (self.raw_score(X) > 0).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "shrinkage": float(self.shrinkage),
            "base_score": float(self.base_score),
            "n_features": self.n_features,
            "train_loss": floats(self.train_loss),
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GbtModel":
        return cls(
            tuple(Tree.from_dict(t) for t in d["trees"]),
            float(d["shrinkage"]),
            float(d["base_score"]),
            int(d["n_features"]),
            tuple(float(v) for v in d["train_loss"]),
        )


def log_loss(y, score) -> float:
    return float(np.mean(np.logaddexp(0.0, score) - y * score))


def split_gain(GL, HL, GR, HR, reg_lambda, gamma):
    """Second-order loss reduction of splitting a node into (L, R)."""
    G, H = GL + GR, HL + HR
    return 0.5 * (GL**2 / (HL + reg_lambda) + GR**2 / (HR + reg_lambda) - G**2 / (H + reg_lambda)) - gamma


def leaf_weight(G, H, reg_lambda):
    return -G / (H + reg_lambda)


def best_split(X: sp.csr_matrix, g: np.ndarray, h: np.ndarray, reg_lambda: float, gamma: float):
    """Exact greedy search over every feature of the node's rows.

    ``X`` holds only the node's rows. Implicit zeros of each feature are
    folded into one synthetic entry carrying their gradient sums, so the
    scan visits every distinct value (zero included) in sorted order without
    densifying the matrix. Returns ``(gain, feature, threshold)`` or ``None``
    when no split has positive gain.
    """
    n, dim = X.shape
    G, H = float(g.sum()), float(h.sum())
    coo = X.tocoo()
    feat = coo.col.astype(np.int64)
    vals = coo.data
    ge = g[coo.row]
    he = h[coo.row]

    nnz_count = np.bincount(feat, minlength=dim)
    zero_feats = np.flatnonzero((nnz_count > 0) & (nnz_count < n))
    g_nz = np.bincount(feat, weights=ge, minlength=dim)
    h_nz = np.bincount(feat, weights=he, minlength=dim)

    feat = np.concatenate([feat, zero_feats])
    vals = np.concatenate([vals, np.zeros(len(zero_feats))])
    ge = np.concatenate([ge, G - g_nz[zero_feats]])
    he = np.concatenate([he, H - h_nz[zero_feats]])
    if len(feat) < 2:
        return None

    order = np.lexsort((vals, feat))
    feat, vals, ge, he = feat[order], vals[order], ge[order], he[order]

    cg = np.cumsum(ge)
    ch = np.cumsum(he)
    starts = np.flatnonzero(np.r_[True, feat[1:] != feat[:-1]])
    seg = np.repeat(starts, np.diff(np.r_[starts, len(feat)]))
    offset_g = np.where(seg > 0, cg[seg - 1], 0.0)
    offset_h = np.where(seg > 0, ch[seg - 1], 0.0)
    GL = cg - offset_g
    HL = ch - offset_h

    # a cut after position j is valid when the next entry is the same
    # feature with a strictly larger value
    cut = np.flatnonzero((feat[:-1] == feat[1:]) & (vals[:-1] != vals[1:]))
    if len(cut) == 0:
        return None
    GLc, HLc = GL[cut], HL[cut]
    gains = split_gain(GLc, HLc, G - GLc, H - HLc, reg_lambda, gamma)
    j = int(np.argmax(gains))
    if not gains[j] > 0.0:
        return None
    pos = cut[j]
    lo, hi = vals[pos], vals[pos + 1]
    threshold = lo + (hi - lo) / 2.0
    if not lo < threshold <= hi:
        threshold = hi
    return float(gains[j]), int(feat[pos]), float(threshold)


def _grow_tree(X: sp.csr_matrix, g, h, config: GbtConfig) -> Tree:
    feature, threshold, left, right, value, gain = [], [], [], [], [], []

    def new_node():
        for arr, v in ((feature, -1), (threshold, 0.0), (left, -1), (right, -1), (value, 0.0), (gain, 0.0)):
            arr.append(v)
        return len(feature) - 1

    root = new_node()
    stack = [(root, np.arange(X.shape[0]), 0)]
    while stack:
        node, rows, depth = stack.pop()
        gn, hn = g[rows], h[rows]
        value[node] = float(leaf_weight(gn.sum(), hn.sum(), config.reg_lambda))
        if depth >= config.max_depth or len(rows) < 2:
            continue
        sub = X[rows]
        found = best_split(sub, gn, hn, config.reg_lambda, config.gamma)
        if found is None:
            continue
        best_gain, f, thr = found
        col = sub[:, f].toarray().ravel()
        go_left = col < thr
        l, r = new_node(), new_node()
        feature[node], threshold[node], gain[node] = f, thr, best_gain
        left[node], right[node] = l, r
        stack.append((r, rows[~go_left], depth + 1))
        stack.append((l, rows[go_left], depth + 1))
    return Tree(tuple(feature), tuple(threshold), tuple(left), tuple(right), tuple(value), tuple(gain))


def gbt_fit(X, y, config: GbtConfig = GbtConfig()) -> GbtModel:
    """Boost ``config.n_trees`` depth-limited trees with Newton leaf weights.

    Training starts from the log-odds of the class balance, so with zero
    trees every prediction is the majority class.
    """
    X, y = check_training_set(X, y)
    yf = y.astype(np.float64)
    pos = yf.sum()
    base = float(np.log(pos / (len(yf) - pos)))
    score = np.full(len(yf), base)
    losses = [log_loss(yf, score)]
    trees = []
    Xc = X.tocsc()
    for _ in range(config.n_trees):
        p = expit(score)
        g = p - yf
        h = p * (1.0 - p)
        tree = _grow_tree(X, g, h, config)
        trees.append(tree)
        score = score + config.shrinkage * tree.predict(Xc)
        losses.append(log_loss(yf, score))
    return GbtModel(tuple(trees), float(config.shrinkage), base, X.shape[1], tuple(losses))
