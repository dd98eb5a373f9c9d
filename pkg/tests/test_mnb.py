from fractions import Fraction

import numpy as np
import pytest

from spaml.classifiers import FitError, MnbConfig, fit, mnb_posterior_scores, predict
from spaml.classifiers.mnb import MnbModel
from spaml.vectorize import bow_vector, fit_lexicon

from oracles import mnb_battery, mnb_exact_argmax


def test_likelihood_rows_are_distributions():
    rng = np.random.default_rng(0)
    X = rng.integers(0, 4, size=(30, 12))
    y = rng.integers(0, 2, size=30)
    y[:2] = [0, 1]
    for alpha in (0.1, 1.0):
        m = fit("MNB", X, y, MnbConfig(alpha))
        assert np.exp(m.log_prior).sum() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(np.exp(m.log_likelihood).sum(axis=1), 1.0, atol=1e-9)


def test_hand_computed_smoothed_counts():
    docs = [["buy", "cheap"], ["hello", "friend"]]
    lex = fit_lexicon(docs)
    X = [bow_vector(d, lex) for d in docs]
    m = fit("MNB", X, [1, 0], MnbConfig(alpha=1.0))
    cheap = lex.index["cheap"]
    assert np.exp(m.log_likelihood[1, cheap]) == pytest.approx(2 / 6)
    assert np.exp(m.log_likelihood[0, cheap]) == pytest.approx(1 / 6)
    s = mnb_posterior_scores(m, bow_vector(["cheap"], lex))
    assert s[1] > s[0]
    assert predict(m, bow_vector(["cheap"], lex)) == 1


def test_zero_vector_scores_equal_priors():
    X = np.array([[1, 0], [0, 1], [1, 1]])
    m = fit("MNB", X, [0, 0, 1])
    np.testing.assert_array_equal(mnb_posterior_scores(m, [0, 0]), m.log_prior)
    # prior favors ham, nothing else to go on
    assert predict(m, [0, 0]) == 0


def test_equal_scores_go_to_ham():
    m = MnbModel(np.log([0.5, 0.5]), np.log([[0.5, 0.5], [0.5, 0.5]]))
    assert predict(m, [3, 1]) == 0


def test_symmetric_classes_get_equal_priors():
    X = np.array([[2, 0], [0, 2], [1, 1], [1, 1]])
    m = fit("MNB", X, [0, 1, 0, 1])
    assert m.log_prior[0] == m.log_prior[1]


def test_fit_rejects_bad_input():
    with pytest.raises(FitError, match="single class"):
        fit("MNB", [[1, 0], [0, 1]], [1, 1])
    with pytest.raises(FitError, match="NaN"):
        fit("MNB", [[np.nan, 0], [0, 1]], [0, 1])
    with pytest.raises(FitError, match="inconsistent"):
        fit("MNB", [[1, 0], [0]], [0, 1])
    with pytest.raises(ValueError):
        fit("MNB", [[-1, 0], [0, 1]], [0, 1])
    m = fit("MNB", [[1, 0], [0, 1]], [0, 1])
    with pytest.raises(FitError, match="length 2"):
        predict(m, [1, 0, 0])


@pytest.mark.parametrize("alpha", [Fraction(1, 10), Fraction(1)])
def test_matches_exact_rational_oracle(alpha):
    sets, queries = mnb_battery()
    mismatches = 0
    for X, y in sets:
        m = fit("MNB", X, y, MnbConfig(float(alpha)))
        got = m.predict(np.array(queries))
        want = [mnb_exact_argmax(X, y, q, alpha) for q in queries]
        mismatches += int(np.sum(got != np.array(want)))
    assert mismatches == 0
