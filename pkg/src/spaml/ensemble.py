"""The seven-member majority-vote super learner."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .classifiers import (
    CONFIG_TYPES,
    GbtConfig,
    KnnConfig,
    LearnerKind,
    LrConfig,
    MnbConfig,
    NccConfig,
    PerceptronConfig,
    SvmConfig,
    fit,
)
from .corpus import Dataset
from .preprocess import StopwordSet, default_stopwords, preprocess_pipeline
from .vectorize import DEFAULT_MAX_TERMS, Lexicon, VectorizerMode, fit_lexicon, vectorize

MEMBER_ORDER = tuple(LearnerKind)
MAJORITY = len(MEMBER_ORDER) // 2 + 1


@dataclass(frozen=True)
class SpamlConfig:
    max_terms: int = DEFAULT_MAX_TERMS
    mnb: MnbConfig = field(default_factory=MnbConfig)
    lr: LrConfig = field(default_factory=LrConfig)
    svm: SvmConfig = field(default_factory=SvmConfig)
    ncc: NccConfig = field(default_factory=NccConfig)
    gbt: GbtConfig = field(default_factory=GbtConfig)
    knn: KnnConfig = field(default_factory=KnnConfig)
    perceptron: PerceptronConfig = field(default_factory=PerceptronConfig)

    def for_kind(self, kind: LearnerKind):
        return getattr(self, _FIELD[kind])

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SpamlConfig":
        kwargs = {"max_terms": int(d["max_terms"])}
        for kind, name in _FIELD.items():
            kwargs[name] = CONFIG_TYPES[kind](**d[name])
        return cls(**kwargs)


_FIELD = {
    LearnerKind.MNB: "mnb",
    LearnerKind.LR: "lr",
    LearnerKind.SVM: "svm",
    LearnerKind.NCC: "ncc",
    LearnerKind.GBT: "gbt",
    LearnerKind.KNN: "knn",
    LearnerKind.PERCEPTRON: "perceptron",
}


def config_digest(mode: VectorizerMode, config: SpamlConfig, seed: int, stopwords: StopwordSet) -> str:
    payload = {
        "mode": VectorizerMode(mode).value,
        "config": config.to_dict(),
        "seed": seed,
        "stopwords": stopwords.digest(),
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def majority_vote(votes) -> int:
    """1 iff at least four of the seven member votes are spam."""
    votes = list(votes)
    if len(votes) != len(MEMBER_ORDER):
        raise ValueError(f"expected {len(MEMBER_ORDER)} votes, got {len(votes)}")
    return int(sum(votes) >= MAJORITY)


@dataclass(frozen=True, eq=False)
class EnsembleModel:
    mode: VectorizerMode
    lexicon: Lexicon
    members: dict
    config: SpamlConfig
    seed: int
    stopwords: StopwordSet
    config_digest: str

    def __post_init__(self):
        if set(self.members) != set(MEMBER_ORDER):
            missing = sorted(k.value for k in set(MEMBER_ORDER) - set(self.members))
            raise ValueError(f"ensemble needs all seven learners; missing {missing}")
        dims = {m.feature_dim for m in self.members.values()}
        if dims != {len(self.lexicon)}:
            raise ValueError(f"member feature sizes {sorted(dims)} differ from lexicon size {len(self.lexicon)}")

    def featurize(self, texts):
        docs = [preprocess_pipeline(t, self.stopwords) for t in texts]
        return vectorize(docs, self.lexicon, self.mode)

    def member_votes(self, X) -> np.ndarray:
        """``(n, 7)`` vote matrix, columns in ``MEMBER_ORDER``."""
        return np.column_stack([self.members[k].predict(X) for k in MEMBER_ORDER])

    def predict_texts(self, texts) -> tuple[np.ndarray, np.ndarray]:
        votes = self.member_votes(self.featurize(texts))
        return (votes.sum(axis=1) >= MAJORITY).astype(np.int64), votes


def ensemble_fit(
    train: Dataset,
    mode: VectorizerMode | str = VectorizerMode.BOW,
    config: SpamlConfig | None = None,
    seed: int = 42,
    stopwords: StopwordSet | None = None,
) -> EnsembleModel:
    """Preprocess, fit the lexicon on ``train`` only, vectorize, fit all seven."""
    mode = VectorizerMode(mode)
    config = config or SpamlConfig()
    stopwords = stopwords or default_stopwords()
    docs = [preprocess_pipeline(m.text, stopwords) for m in train]
    lexicon = fit_lexicon(docs, config.max_terms)
    X = vectorize(docs, lexicon, mode)
    y = np.asarray(train.labels, dtype=np.int64)
    members = {kind: fit(kind, X, y, config.for_kind(kind), seed) for kind in MEMBER_ORDER}
    return EnsembleModel(
        mode, lexicon, members, config, seed, stopwords, config_digest(mode, config, seed, stopwords)
    )


def ensemble_predict(model: EnsembleModel, text: str) -> tuple[int, list[int]]:
    """Label of one raw message plus the seven member votes behind it."""
    labels, votes = model.predict_texts([text])
    return int(labels[0]), votes[0].tolist()
