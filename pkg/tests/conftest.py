import os
from pathlib import Path

import numpy as np
import pytest

from spaml.corpus import Dataset, LabeledMessage

REPO = Path(__file__).resolve().parent.parent

HAM_WORDS = ("lunch", "home", "later", "mom", "meeting", "tonight", "dinner", "class", "sorry", "movie")
SPAM_WORDS = ("free", "win", "prize", "cash", "claim", "urgent", "txt", "offer", "award", "ringtone")
SHARED_WORDS = ("call", "now", "today", "phone", "message", "week")


def make_dataset(labels, texts=None, source="test") -> Dataset:
    if texts is None:
        texts = [f"msg {i}" for i in range(len(labels))]
    return Dataset(tuple(LabeledMessage(int(y), t) for y, t in zip(labels, texts)), source)


def synthetic_sms(n_ham=120, n_spam=40, seed=0, noise=0.1) -> Dataset:
    """Short messages drawn mostly from class vocabularies plus shared words."""
    rng = np.random.default_rng(seed)
    rows = []
    for label, n in ((0, n_ham), (1, n_spam)):
        own = HAM_WORDS if label == 0 else SPAM_WORDS
        other = SPAM_WORDS if label == 0 else HAM_WORDS
        for _ in range(n):
            words = []
            for _ in range(rng.integers(3, 8)):
                u = rng.random()
                pool = other if u < noise else SHARED_WORDS if u < 0.35 else own
                words.append(pool[rng.integers(len(pool))])
            if label == 1 and rng.random() < 0.5:
                words.append(str(rng.integers(10000, 99999)))
            rows.append((label, " ".join(words)))
    order = rng.permutation(len(rows))
    return make_dataset([rows[i][0] for i in order], [rows[i][1] for i in order], f"synthetic-{seed}")


def write_tsv(path: Path, dataset: Dataset) -> Path:
    names = {0: "ham", 1: "spam"}
    path.write_text("".join(f"{names[m.label]}\t{m.text}\n" for m in dataset), encoding="utf-8")
    return path


def sms_corpus_path() -> Path:
    """Location of the full SMS Spam Collection: $SPAML_CORPUS or data/SMSSpamCollection."""
    env = os.environ.get("SPAML_CORPUS")
    return Path(env) if env else REPO / "data" / "SMSSpamCollection"


@pytest.fixture
def sms_small():
    return synthetic_sms()


@pytest.fixture
def sms_small_tsv(tmp_path):
    return write_tsv(tmp_path / "sms.tsv", synthetic_sms())


# (criterion number, title, passed, detail) filled in by test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number} {status}: {title} ({detail})")
