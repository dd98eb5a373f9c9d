"""Lexicon fitting plus bag-of-words and TF-IDF vectorization."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.sparse as sp

DEFAULT_MAX_TERMS = 3000


class VectorizeError(ValueError):
    pass


class VectorizerMode(str, Enum):
    BOW = "bow"
    TFIDF = "tfidf"

    @property
    def label(self) -> str:
        return {"bow": "BoW", "tfidf": "TF-IDF"}[self.value]


@dataclass(frozen=True)
class Lexicon:
    """Vocabulary fixed at training time.

    ``terms[i]`` is the term at feature position ``i`` and ``doc_freq[i]`` the
    number of training documents containing it. Terms are ordered by
    descending total occurrence count, ties broken lexicographically.
    """

    terms: tuple[str, ...]
    doc_freq: tuple[int, ...]
    total_docs: int
    max_terms: int = DEFAULT_MAX_TERMS
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "doc_freq", tuple(int(x) for x in self.doc_freq))
        if len(self.terms) != len(self.doc_freq):
            raise VectorizeError("terms and doc_freq differ in length")
        if len(set(self.terms)) != len(self.terms):
            raise VectorizeError("lexicon terms are not unique")
        if len(self.terms) > self.max_terms:
            raise VectorizeError(f"{len(self.terms)} terms exceed max_terms={self.max_terms}")
        for t, df in zip(self.terms, self.doc_freq):
            if not 1 <= df <= self.total_docs:
                raise VectorizeError(f"doc_freq[{t!r}]={df} outside [1, {self.total_docs}]")
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index

    def idf_array(self) -> np.ndarray:
        df = np.asarray(self.doc_freq, dtype=np.float64)
        return np.log10(self.total_docs / df) if len(df) else df


@dataclass(frozen=True)
class FeatureVector:
    """Sparse vector: sorted ``indices`` with matching ``values``, length ``dim``."""

    indices: np.ndarray
    values: np.ndarray
    dim: int

    def toarray(self) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.float64)
        out[self.indices] = self.values
        return out

    def tocsr(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.values, self.indices, np.array([0, len(self.indices)])), shape=(1, self.dim)
        )


def fit_lexicon(docs, max_terms: int = DEFAULT_MAX_TERMS) -> Lexicon:
    docs = list(docs)
    if not docs:
        raise VectorizeError("cannot fit a lexicon on zero documents")
    if max_terms < 1:
        raise VectorizeError(f"max_terms must be positive, got {max_terms}")
    totals = Counter()
    dfs = Counter()
    for doc in docs:
        totals.update(doc)
        dfs.update(set(doc))
    if not totals:
        raise VectorizeError("all documents are empty; nothing to build a lexicon from")
    ranked = sorted(totals, key=lambda t: (-totals[t], t))[:max_terms]
    return Lexicon(tuple(ranked), tuple(dfs[t] for t in ranked), len(docs), max_terms)


def tf(doc, term: str) -> float:
    if not doc:
        raise VectorizeError("term frequency of an empty document is undefined")
    return doc.count(term) / len(doc)


def idf(lex: Lexicon, term: str) -> float:
    try:
        i = lex.index[term]
    except KeyError:
        raise VectorizeError(f"term {term!r} is not in the lexicon") from None
    return math.log10(lex.total_docs / lex.doc_freq[i])


def _counts(doc, lex: Lexicon) -> tuple[np.ndarray, np.ndarray]:
    c = Counter(t for t in doc if t in lex.index)
    idx = np.fromiter((lex.index[t] for t in c), dtype=np.int64, count=len(c))
    cnt = np.fromiter(c.values(), dtype=np.float64, count=len(c))
    order = np.argsort(idx, kind="stable")
    return idx[order], cnt[order]


def bow_vector(doc, lex: Lexicon) -> FeatureVector:
    idx, cnt = _counts(doc, lex)
    return FeatureVector(idx, cnt, len(lex))


def tfidf_vector(doc, lex: Lexicon, idf_values: np.ndarray | None = None) -> FeatureVector:
    """TF x IDF per lexicon term; an empty document maps to the zero vector."""
    if idf_values is None:
        idf_values = lex.idf_array()
    idx, cnt = _counts(doc, lex)
    if not doc:
        return FeatureVector(idx, cnt, len(lex))
    vals = (cnt / len(doc)) * idf_values[idx]
    keep = vals != 0.0
    return FeatureVector(idx[keep], vals[keep], len(lex))


def vectorize(docs, lex: Lexicon, mode: VectorizerMode | str) -> sp.csr_matrix:
    """Stack the vectors of ``docs`` into an ``(n_docs, len(lex))`` CSR matrix."""
    mode = VectorizerMode(mode)
    idf_values = lex.idf_array() if mode is VectorizerMode.TFIDF else None
    indptr = [0]
    indices = []
    data = []
    for doc in docs:
        if mode is VectorizerMode.BOW:
            v = bow_vector(doc, lex)
        else:
            v = tfidf_vector(doc, lex, idf_values)
        indices.append(v.indices)
        data.append(v.values)
        indptr.append(indptr[-1] + len(v.indices))
    n = len(indptr) - 1
    return sp.csr_matrix(
        (
            np.concatenate(data) if data else np.zeros(0),
            np.concatenate(indices) if indices else np.zeros(0, dtype=np.int64),
            np.asarray(indptr, dtype=np.int64),
        ),
        shape=(n, len(lex)),
    )
