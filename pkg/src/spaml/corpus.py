"""Loading the labeled SMS corpus and carving it into stratified splits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

HAM = 0
SPAM = 1
LABELS = {"ham": HAM, "spam": SPAM}
LABEL_NAMES = {HAM: "ham", SPAM: "spam"}


class CorpusError(ValueError):
    """Raised for malformed corpus files and impossible split requests."""


@dataclass(frozen=True)
class LabeledMessage:
    label: int
    text: str

    def __post_init__(self):
        if self.label not in (HAM, SPAM):
            raise CorpusError(f"label must be 0 or 1, got {self.label!r}")
        if not self.text.strip():
            raise CorpusError("message text is empty")


@dataclass(frozen=True)
class Dataset:
    messages: tuple[LabeledMessage, ...]
    source_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "messages", tuple(self.messages))

    def __len__(self) -> int:
        return len(self.messages)

    def __iter__(self):
        return iter(self.messages)

    @property
    def labels(self) -> list[int]:
        return [m.label for m in self.messages]

    @property
    def texts(self) -> list[str]:
        return [m.text for m in self.messages]

    def class_counts(self) -> dict[int, int]:
        counts = {HAM: 0, SPAM: 0}
        for m in self.messages:
            counts[m.label] += 1
        return counts

    def subset(self, indices, tag: str) -> "Dataset":
        return Dataset(tuple(self.messages[i] for i in indices), f"{self.source_id}{tag}")


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.75
    seed: int = 42
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise CorpusError(
                f"train_fraction must lie strictly between 0 and 1, got {self.train_fraction}"
            )


def parse_line(line: str, lineno: int) -> LabeledMessage:
    line = line.rstrip("\n").rstrip("\r")
    label, sep, text = line.partition("\t")
    if not sep:
        raise CorpusError(f"line {lineno}: missing tab between label and text")
    if label not in LABELS:
        raise CorpusError(f"line {lineno}: unknown label {label!r} (expected 'ham' or 'spam')")
    if not text.strip():
        raise CorpusError(f"line {lineno}: empty message text")
    return LabeledMessage(LABELS[label], text)


def load_corpus(path, format: str = "tsv-label-text") -> Dataset:
    """Read a ``label<TAB>text`` file such as the UCI SMS Spam Collection.

    Input order is preserved. Labels are case-sensitive ``ham``/``spam``; a
    trailing ``\\r`` is stripped from every line.
    """
    if format != "tsv-label-text":
        raise CorpusError(f"unsupported corpus format {format!r}")
    path = Path(path)
    messages = []
    with path.open(encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip("\r\n"):
                continue
            messages.append(parse_line(line, lineno))
    if not messages:
        raise CorpusError(f"{path}: corpus file is empty")
    return Dataset(tuple(messages), str(path))


def _class_indices(d: Dataset) -> dict[int, np.ndarray]:
    labels = np.asarray(d.labels, dtype=np.int64)
    return {c: np.flatnonzero(labels == c) for c in (HAM, SPAM)}


def _stratified_train_counts(sizes: dict[int, int], fraction: float) -> dict[int, int]:
    # per-class floor, then top up (at most one per class, larger class first)
    # until the overall train size equals round-half-up(fraction * n)
    n = sum(sizes.values())
    target = math.floor(fraction * n + 0.5)
    counts = {c: math.floor(fraction * s) for c, s in sizes.items()}
    order = sorted(sizes, key=lambda c: (-sizes[c], c))
    for c in order:
        if sum(counts.values()) >= target:
            break
        counts[c] += 1
    return counts


def stratified_split(d: Dataset, s: SplitSpec) -> tuple[Dataset, Dataset]:
    """Split ``d`` into (train, test) keeping the ham/spam ratio in both halves.

    Members of each half keep their original corpus order. With
    ``s.stratified`` false the split is a plain seeded shuffle.
    """
    rng = np.random.default_rng(s.seed)
    by_class = _class_indices(d)
    for c, idx in by_class.items():
        if len(idx) < 2:
            raise CorpusError(
                f"class {LABEL_NAMES[c]!r} has {len(idx)} member(s); at least 2 are needed to split"
            )

    if s.stratified:
        counts = _stratified_train_counts({c: len(i) for c, i in by_class.items()}, s.train_fraction)
        train_idx = []
        for c in (HAM, SPAM):
            perm = rng.permutation(by_class[c])
            train_idx.extend(perm[: counts[c]].tolist())
    else:
        n_train = math.floor(s.train_fraction * len(d) + 0.5)
        train_idx = rng.permutation(len(d))[:n_train].tolist()

    train_set = set(train_idx)
    train = sorted(train_set)
    test = [i for i in range(len(d)) if i not in train_set]
    return d.subset(train, "[train]"), d.subset(test, "[test]")


def k_folds(d: Dataset, k: int, seed: int) -> list[tuple[Dataset, Dataset]]:
    """Stratified k-fold partition; returns ``(train, validation)`` pairs.

    Each class is shuffled separately and the classes are dealt round-robin
    into folds with one running counter, so fold sizes differ by at most one
    overall and per class.
    """
    if k < 2:
        raise CorpusError(f"k must be at least 2, got {k}")
    if k > len(d):
        raise CorpusError(f"k={k} exceeds the dataset size {len(d)}")
    by_class = _class_indices(d)
    for c, idx in by_class.items():
        if len(idx) < k:
            raise CorpusError(
                f"class {LABEL_NAMES[c]!r} has {len(idx)} member(s), fewer than k={k}"
            )

    rng = np.random.default_rng(seed)
    fold_of = np.empty(len(d), dtype=np.int64)
    counter = 0
    for c in (HAM, SPAM):
        for i in rng.permutation(by_class[c]):
            fold_of[i] = counter % k
            counter += 1

    folds = []
    for f in range(k):
        val = np.flatnonzero(fold_of == f).tolist()
        train = np.flatnonzero(fold_of != f).tolist()
        folds.append((d.subset(train, f"[fold{f}-train]"), d.subset(val, f"[fold{f}-val]")))
    return folds
