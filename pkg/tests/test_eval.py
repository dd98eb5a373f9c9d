import csv
import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spaml.classifiers import KnnConfig
from spaml.ensemble import SpamlConfig
from spaml.eval import (
    CSV_FIELDS,
    UNDEFINED,
    ConfusionMatrix,
    EvalError,
    MetricsReport,
    accuracy,
    confusion,
    cross_validate,
    f1,
    format_report,
    holdout_evaluate,
    precision,
    recall,
    records_to_csv,
    report_records,
    summarize,
)

from conftest import make_dataset, synthetic_sms


def test_confusion_examples():
    assert confusion([1, 0], [1, 1]) == ConfusionMatrix(tp=1, tn=0, fp=0, fn=1)
    c = confusion([0, 1, 1, 0], [0, 1, 1, 0])
    assert c.fp == c.fn == 0
    with pytest.raises(EvalError, match="predictions"):
        confusion([1, 0], [1])
    with pytest.raises(EvalError):
        confusion([], [])


def test_all_ham_predictor_on_sms_sized_test_set():
    truth = [0] * 1206 + [1] * 187
    c = confusion([0] * 1393, truth)
    assert (c.tn, c.fn, c.tp, c.fp) == (1206, 187, 0, 0)
    assert precision(c) is UNDEFINED


def test_accuracy_and_precision():
    c = ConfusionMatrix(tp=9, tn=89, fp=1, fn=1)
    assert accuracy(c) == 0.98
    assert precision(c) == 0.9
    assert accuracy(ConfusionMatrix(3, 4, 0, 0)) == 1.0
    assert accuracy(ConfusionMatrix(0, 0, 2, 3)) == 0.0
    assert precision(ConfusionMatrix(5, 0, 0, 2)) == 1.0
    with pytest.raises(EvalError, match="empty"):
        accuracy(ConfusionMatrix(0, 0, 0, 0))
    with pytest.raises(EvalError):
        ConfusionMatrix(-1, 0, 0, 0)


def test_supplementary_metrics():
    c = ConfusionMatrix(tp=6, tn=10, fp=2, fn=2)
    assert recall(c) == 0.75
    assert f1(c) == pytest.approx(0.75)
    assert recall(ConfusionMatrix(0, 5, 1, 0)) is UNDEFINED


@given(st.lists(st.tuples(st.sampled_from([0, 1]), st.sampled_from([0, 1])), min_size=1, max_size=200))
def test_report_consistency(pairs):
    pred, truth = zip(*pairs)
    c = confusion(pred, truth)
    assert c.total == len(pairs)
    r = MetricsReport.from_confusion(c)
    assert r.accuracy == accuracy(r.confusion)
    assert r.precision == precision(r.confusion)
    assert 0 <= r.accuracy <= 1
    assert r.precision is None or 0 <= r.precision <= 1


def test_summary_mean_and_sample_std():
    s = summarize([0.9, 0.95, 1.0])
    assert abs(s.mean - np.mean([0.9, 0.95, 1.0])) < 1e-12
    assert s.std == pytest.approx(0.05)
    assert summarize([None, 0.5]).n == 1
    assert summarize([None]).mean is None


def test_perfectly_separable_corpus_scores_one():
    labels = [0] * 10 + [1] * 10
    texts = [f"hamword filler{i}" for i in range(10)] + [f"spamword filler{i}" for i in range(10)]
    d = make_dataset(labels, texts)
    cfg = SpamlConfig(knn=KnnConfig(k=1))
    res = cross_validate(d, "bow", cfg, k=5, seed=0)
    assert [f.report.accuracy for f in res.folds] == [1.0] * 5


def test_two_folds_on_four_rows():
    d = make_dataset([0, 1, 0, 1], ["lunch home", "free cash", "home lunch", "cash free"])
    res = cross_validate(d, "bow", SpamlConfig(knn=KnnConfig(k=1)), k=2, seed=0)
    assert len(res.folds) == 2
    assert [f.report.confusion.total for f in res.folds] == [2, 2]


@pytest.mark.parametrize("mode", ["bow", "tfidf"])
def test_cross_validation_bookkeeping(mode):
    d = synthetic_sms(n_ham=90, n_spam=30, seed=5)
    res = cross_validate(d, mode, k=3, seed=2)
    assert sum(f.validation_size for f in res.folds) == len(d)
    for f in res.folds:
        # the lexicon saw only the training part of the fold
        assert f.lexicon_docs == f.train_size == len(d) - f.validation_size
        r = f.report
        assert r.accuracy == accuracy(r.confusion)
        assert len(r.per_member) == 7
    summary = res.summary()
    accs = [f.report.accuracy for f in res.folds]
    assert abs(summary["SpaML"]["accuracy"].mean - sum(accs) / len(accs)) < 1e-12
    assert res.pooled().confusion.total == len(d)


def test_holdout_and_outputs():
    d = synthetic_sms(seed=6)
    res = holdout_evaluate(d, "bow", train_fraction=0.75, seed=1)
    assert res.train_size + res.test_size == len(d)
    text = format_report(res.report, "title")
    assert text.splitlines()[0] == "title"
    assert "SpaML" in text and "Perceptron" in text
    rows = list(csv.DictReader(io.StringIO(records_to_csv(report_records("bow", res.report)))))
    assert tuple(rows[0]) == CSV_FIELDS
    assert [r["learner"] for r in rows][-1] == "SpaML"
    assert len(rows) == 8
    r = rows[-1]
    c = res.report.confusion
    assert (int(r["tp"]), int(r["tn"]), int(r["fp"]), int(r["fn"])) == (c.tp, c.tn, c.fp, c.fn)
    assert float(r["accuracy"]) == res.report.accuracy


def test_undefined_precision_in_outputs():
    c = ConfusionMatrix(0, 5, 0, 1)
    r = MetricsReport.from_confusion(c)
    assert "undefined" in format_report(r)
    assert report_records("tfidf", r)[0]["precision"] == "undefined"
