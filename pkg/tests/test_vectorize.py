import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spaml.vectorize import (
    Lexicon,
    VectorizeError,
    VectorizerMode,
    bow_vector,
    fit_lexicon,
    idf,
    tf,
    tfidf_vector,
    vectorize,
)

D1 = "this is a dog".split()
D2 = "this is not a dog".split()
D3 = "a dog is a special pet which is a friendly pet".split()
DOCS = [D1, D2, D3]
ORDER = ("this", "is", "a", "dog", "not", "special", "pet", "which", "friendly")


def toy_lexicon():
    fitted = fit_lexicon(DOCS, 9)
    return Lexicon(ORDER, tuple(fitted.doc_freq[fitted.index[t]] for t in ORDER), 3, 9)


def test_lexicon_contents():
    lex = fit_lexicon(DOCS, 9)
    assert set(lex.terms) == set(ORDER)
    assert lex.total_docs == 3
    # ranked by total count, ties lexicographic
    assert lex.terms[:4] == ("a", "is", "dog", "pet")


def test_lexicon_cap_keeps_most_frequent():
    assert fit_lexicon(DOCS, 2).terms == ("a", "is")


def test_single_document_lexicon():
    lex = fit_lexicon([["x"]])
    assert lex.terms == ("x",) and lex.doc_freq == (1,) and lex.total_docs == 1


def test_lexicon_errors():
    with pytest.raises(VectorizeError):
        fit_lexicon([])
    with pytest.raises(VectorizeError, match="empty"):
        fit_lexicon([[], []])
    with pytest.raises(VectorizeError):
        Lexicon(("a", "a"), (1, 1), 2)
    with pytest.raises(VectorizeError):
        Lexicon(("a",), (3,), 2)


def test_bow_rows():
    lex = toy_lexicon()
    assert bow_vector(D1, lex).toarray().tolist() == [1, 1, 1, 1, 0, 0, 0, 0, 0]
    assert bow_vector(D3, lex).toarray().tolist() == [0, 2, 3, 1, 0, 1, 2, 1, 1]
    assert bow_vector([], lex).toarray().tolist() == [0] * 9
    assert bow_vector(["unseen", "dog"], lex).toarray().tolist() == [0, 0, 0, 1, 0, 0, 0, 0, 0]


def test_tf_values():
    assert tf(D1, "this") == 1 / 4
    assert tf(D3, "pet") == 2 / 11
    assert tf(D1, "pet") == 0
    with pytest.raises(VectorizeError):
        tf([], "this")


def test_idf_values():
    lex = toy_lexicon()
    assert idf(lex, "this") == pytest.approx(0.176, abs=1e-3)
    assert idf(lex, "is") == 0
    assert idf(lex, "pet") == pytest.approx(0.477, abs=1e-3)
    assert idf(lex, "pet") == math.log10(3)
    with pytest.raises(VectorizeError, match="not in the lexicon"):
        idf(lex, "cat")


def test_tfidf_cells():
    lex = toy_lexicon()
    v2, v3, v1 = (tfidf_vector(d, lex).toarray() for d in (D2, D3, D1))
    assert v2[ORDER.index("not")] == pytest.approx(0.095, abs=1e-3)
    assert v3[ORDER.index("pet")] == pytest.approx(0.087, abs=1e-3)
    # the published table prints 0.036 here; 1/4 * log10(3/2) is 0.044
    assert v1[0] == pytest.approx(0.044, abs=1e-3)
    assert tfidf_vector([], lex).toarray().tolist() == [0.0] * 9


def test_vectorize_matches_single_vectors():
    lex = toy_lexicon()
    for mode, fn in ((VectorizerMode.BOW, bow_vector), (VectorizerMode.TFIDF, tfidf_vector)):
        X = vectorize(DOCS + [[]], lex, mode)
        assert X.shape == (4, 9)
        for i, d in enumerate(DOCS + [[]]):
            np.testing.assert_array_equal(X[i].toarray().ravel(), fn(d, lex).toarray())


def test_mode_labels():
    assert VectorizerMode("tfidf").label == "TF-IDF"
    with pytest.raises(ValueError):
        VectorizerMode("tf")


vocab = st.sampled_from("alpha beta gamma delta eps zeta eta theta".split())
docs_strategy = st.lists(st.lists(vocab, max_size=8), min_size=1, max_size=10).filter(
    lambda ds: any(ds)
)


@settings(max_examples=150, deadline=None)
@given(docs_strategy, st.integers(1, 8), st.lists(vocab, max_size=10))
def test_vectorizer_properties(docs, cap, probe):
    lex = fit_lexicon(docs, cap)
    assert len(lex) <= cap
    assert all(1 <= df <= lex.total_docs for df in lex.doc_freq)
    before = (lex.terms, lex.doc_freq, lex.total_docs)

    b = bow_vector(probe, lex).toarray()
    assert (b >= 0).all()
    in_lex = sum(t in lex for t in probe)
    assert b.sum() == in_lex <= len(probe)

    t1 = tfidf_vector(probe, lex).toarray()
    t2 = tfidf_vector(list(probe), lex).toarray()
    assert (t1 >= 0).all() and np.isfinite(t1).all()
    np.testing.assert_array_equal(t1, t2)

    # terms in every training doc have idf 0 and never contribute
    everywhere = [i for i, df in enumerate(lex.doc_freq) if df == lex.total_docs]
    assert (t1[everywhere] == 0).all()
    # vectorizing new documents never touches the fitted lexicon
    vectorize([probe], lex, "tfidf")
    assert (lex.terms, lex.doc_freq, lex.total_docs) == before
