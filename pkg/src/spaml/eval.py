"""Confusion matrices, accuracy/precision, holdout and k-fold evaluation."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Dataset, SplitSpec, k_folds, stratified_split
from .ensemble import MEMBER_ORDER, EnsembleModel, SpamlConfig, ensemble_fit
from .preprocess import StopwordSet
from .vectorize import VectorizerMode

ENSEMBLE_NAME = "SpaML"
CSV_FIELDS = ("mode", "learner", "accuracy", "precision", "tp", "tn", "fp", "fn")

# precision with no spam verdicts (tp + fp = 0) has no value; we say so
# explicitly instead of reporting 0 or 1
UNDEFINED = None


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with spam (1) as the positive class."""

    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise EvalError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            self.tp + other.tp, self.tn + other.tn, self.fp + other.fp, self.fn + other.fn
        )


def confusion(pred, truth) -> ConfusionMatrix:
    pred = np.asarray(pred, dtype=np.int64).ravel()
    truth = np.asarray(truth, dtype=np.int64).ravel()
    if pred.shape != truth.shape:
        raise EvalError(f"{len(pred)} predictions for {len(truth)} labels")
    if len(pred) == 0:
        raise EvalError("nothing to evaluate")
    for name, a in (("predictions", pred), ("labels", truth)):
        if not np.isin(a, (0, 1)).all():
            raise EvalError(f"{name} must be 0 or 1")
    return ConfusionMatrix(
        tp=int(np.sum((pred == 1) & (truth == 1))),
        tn=int(np.sum((pred == 0) & (truth == 0))),
        fp=int(np.sum((pred == 1) & (truth == 0))),
        fn=int(np.sum((pred == 0) & (truth == 1))),
    )


def accuracy(c: ConfusionMatrix) -> float:
    if c.total == 0:
        raise EvalError("accuracy of an empty confusion matrix")
    return (c.tp + c.tn) / c.total


def precision(c: ConfusionMatrix) -> float | None:
    """``tp / (tp + fp)``, or ``UNDEFINED`` when nothing was called spam."""
    if c.tp + c.fp == 0:
        return UNDEFINED
    return c.tp / (c.tp + c.fp)


def recall(c: ConfusionMatrix) -> float | None:
    if c.tp + c.fn == 0:
        return UNDEFINED
    return c.tp / (c.tp + c.fn)


def f1(c: ConfusionMatrix) -> float | None:
    p, r = precision(c), recall(c)
    if p is None or r is None or p + r == 0:
        return UNDEFINED
    return 2 * p * r / (p + r)


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: float | None
    confusion: ConfusionMatrix
    per_member: dict | None = None

    @classmethod
    def from_confusion(cls, c: ConfusionMatrix, per_member: dict | None = None) -> "MetricsReport":
        return cls(accuracy(c), precision(c), c, per_member)

    @property
    def recall(self) -> float | None:
        return recall(self.confusion)

    @property
    def f1(self) -> float | None:
        return f1(self.confusion)

    def rows(self):
        """``(learner name, report)`` pairs: members in fixed order, then the ensemble."""
        out = []
        if self.per_member:
            out.extend((k.value, self.per_member[k]) for k in MEMBER_ORDER if k in self.per_member)
        out.append((ENSEMBLE_NAME, self))
        return out

    def best_member_accuracy(self) -> float:
        if not self.per_member:
            raise EvalError("report has no per-member metrics")
        return max(r.accuracy for r in self.per_member.values())


def report_from_votes(labels, votes, truth) -> MetricsReport:
    """Ensemble report with one sub-report per column of ``votes``."""
    votes = np.asarray(votes)
    members = {
        kind: MetricsReport.from_confusion(confusion(votes[:, j], truth))
        for j, kind in enumerate(MEMBER_ORDER)
    }
    return MetricsReport.from_confusion(confusion(labels, truth), members)


def evaluate_model(model: EnsembleModel, test: Dataset) -> MetricsReport:
    labels, votes = model.predict_texts(test.texts)
    return report_from_votes(labels, votes, test.labels)


@dataclass(frozen=True)
class HoldoutResult:
    mode: VectorizerMode
    train_size: int
    test_size: int
    report: MetricsReport
    model: EnsembleModel = field(repr=False)


def holdout_evaluate(
    d: Dataset,
    mode: VectorizerMode | str = VectorizerMode.BOW,
    config: SpamlConfig | None = None,
    train_fraction: float = 0.75,
    seed: int = 42,
    stopwords: StopwordSet | None = None,
) -> HoldoutResult:
    """Fit on a stratified ``train_fraction`` split and score the rest."""
    mode = VectorizerMode(mode)
    train, test = stratified_split(d, SplitSpec(train_fraction, seed))
    model = ensemble_fit(train, mode, config, seed, stopwords)
    return HoldoutResult(mode, len(train), len(test), evaluate_model(model, test), model)


@dataclass(frozen=True)
class FoldResult:
    index: int
    train_size: int
    validation_size: int
    lexicon_docs: int
    report: MetricsReport


@dataclass(frozen=True)
class Summary:
    mean: float | None
    std: float | None
    n: int


def summarize(values) -> Summary:
    """Mean and sample standard deviation (ddof=1), skipping undefined values."""
    vals = [v for v in values if v is not None]
    if not vals:
        return Summary(None, None, 0)
    mean = math.fsum(vals) / len(vals)
    std = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
    return Summary(mean, std, len(vals))


@dataclass(frozen=True)
class CrossValidationResult:
    mode: VectorizerMode
    k: int
    seed: int
    folds: tuple[FoldResult, ...]

    def summary(self) -> dict:
        """``learner -> {"accuracy": Summary, "precision": Summary}``."""
        out = {}
        names = [name for name, _ in self.folds[0].report.rows()]
        for name in names:
            reps = [dict(f.report.rows())[name] for f in self.folds]
            out[name] = {
                "accuracy": summarize(r.accuracy for r in reps),
                "precision": summarize(r.precision for r in reps),
            }
        return out

    def pooled(self) -> MetricsReport:
        """One report over every validation row (folds are disjoint)."""
        def total(get):
            c = get(self.folds[0].report)
            for f in self.folds[1:]:
                c = c + get(f.report)
            return c

        members = {
            kind: MetricsReport.from_confusion(total(lambda r, k=kind: r.per_member[k].confusion))
            for kind in MEMBER_ORDER
        }
        return MetricsReport.from_confusion(total(lambda r: r.confusion), members)


def cross_validate(
    d: Dataset,
    mode: VectorizerMode | str = VectorizerMode.BOW,
    config: SpamlConfig | None = None,
    k: int = 10,
    seed: int = 42,
    stopwords: StopwordSet | None = None,
) -> CrossValidationResult:
    """Stratified k-fold evaluation; each fold refits lexicon and members."""
    mode = VectorizerMode(mode)
    folds = []
    for i, (train, val) in enumerate(k_folds(d, k, seed)):
        model = ensemble_fit(train, mode, config, seed, stopwords)
        folds.append(
            FoldResult(i, len(train), len(val), model.lexicon.total_docs, evaluate_model(model, val))
        )
    return CrossValidationResult(mode, k, seed, tuple(folds))


def fmt_ratio(x: float | None, digits: int = 2) -> str:
    """Percentage with ``digits`` decimals; ``undefined`` for a missing value."""
    return "undefined" if x is None else f"{100 * x:.{digits}f}"


def align_table(header, rows) -> str:
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    lines = []
    for r in [header, *rows]:
        cells = [str(r[0]).ljust(widths[0])] + [str(c).rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def format_report(report: MetricsReport, title: str = "") -> str:
    header = ("Learner", "Accuracy", "Precision", "Recall", "F1", "TP", "TN", "FP", "FN")
    rows = []
    for name, r in report.rows():
        c = r.confusion
        rows.append(
            (name, fmt_ratio(r.accuracy), fmt_ratio(r.precision), fmt_ratio(r.recall),
             fmt_ratio(r.f1), c.tp, c.tn, c.fp, c.fn)
        )
    table = align_table(header, rows)
    return f"{title}\n{table}" if title else table


def format_comparison(reports: dict) -> str:
    """Accuracy/precision per learner, one column pair per mode."""
    modes = list(reports)
    header = ["Learner"]
    for m in modes:
        label = VectorizerMode(m).label
        header += [f"{label} acc", f"{label} prec"]
    names = [name for name, _ in reports[modes[0]].rows()]
    rows = []
    for name in names:
        row = [name]
        for m in modes:
            r = dict(reports[m].rows())[name]
            row += [fmt_ratio(r.accuracy), fmt_ratio(r.precision)]
        rows.append(row)
    return align_table(header, rows)


def format_cv(result: CrossValidationResult) -> str:
    header = ("Fold", "Train", "Valid", f"{ENSEMBLE_NAME} acc", f"{ENSEMBLE_NAME} prec", "Best member acc")
    rows = [
        (f.index, f.train_size, f.validation_size, fmt_ratio(f.report.accuracy),
         fmt_ratio(f.report.precision), fmt_ratio(f.report.best_member_accuracy()))
        for f in result.folds
    ]
    per_fold = align_table(header, rows)

    def ms(s: Summary) -> str:
        if s.mean is None:
            return "undefined"
        return f"{fmt_ratio(s.mean)} +/- {fmt_ratio(s.std)}"

    summary = result.summary()
    srows = [(name, ms(v["accuracy"]), ms(v["precision"])) for name, v in summary.items()]
    agg = align_table(("Learner", "Accuracy mean +/- std", "Precision mean +/- std"), srows)
    title = f"{result.k}-fold cross-validation, {result.mode.label}, seed {result.seed}"
    return f"{title}\n{per_fold}\n\n{agg}"


def report_records(mode: VectorizerMode | str, report: MetricsReport) -> list[dict]:
    mode = VectorizerMode(mode)
    out = []
    for name, r in report.rows():
        c = r.confusion
        out.append({
            "mode": mode.value,
            "learner": name,
            "accuracy": repr(r.accuracy),
            "precision": "undefined" if r.precision is None else repr(r.precision),
            "tp": c.tp,
            "tn": c.tn,
            "fp": c.fp,
            "fn": c.fn,
        })
    return out


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    return buf.getvalue()


__all__ = [
    "CSV_FIELDS",
    "ENSEMBLE_NAME",
    "UNDEFINED",
    "ConfusionMatrix",
    "CrossValidationResult",
    "EvalError",
    "FoldResult",
    "HoldoutResult",
    "MetricsReport",
    "Summary",
    "accuracy",
    "align_table",
    "confusion",
    "cross_validate",
    "evaluate_model",
    "f1",
    "fmt_ratio",
    "format_comparison",
    "format_cv",
    "format_report",
    "holdout_evaluate",
    "precision",
    "recall",
    "records_to_csv",
    "report_from_votes",
    "report_records",
    "summarize",
]
