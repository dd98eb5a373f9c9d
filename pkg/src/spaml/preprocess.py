"""Text normalization: lowercase, tokenize, drop stop words, Porter-stem."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from nltk.stem.porter import PorterStemmer

# maximal runs of letters/digits; underscore is a word char for \w, so exclude it
_TOKEN_RE = re.compile(r"[^\W_]+")

_stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)

DEFAULT_STOPWORDS_RESOURCE = "stopwords_en.txt"


@dataclass(frozen=True)
class StopwordSet:
    words: frozenset[str]
    source: str = ""

    def __post_init__(self):
        bad = [w for w in self.words if w != w.lower()]
        if bad:
            raise ValueError(f"stop words must be lowercase: {sorted(bad)[:5]}")

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    def digest(self) -> str:
        joined = "\n".join(sorted(self.words)).encode("utf-8")
        return hashlib.sha256(joined).hexdigest()[:16]

    @classmethod
    def from_lines(cls, lines, source: str = "") -> "StopwordSet":
        words = set()
        for line in lines:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            words.add(line)
        return cls(frozenset(words), source)

    @classmethod
    def from_file(cls, path) -> "StopwordSet":
        path = Path(path)
        with path.open(encoding="utf-8") as fh:
            return cls.from_lines(fh, str(path))


def default_stopwords() -> StopwordSet:
    """The bundled 179-word English list."""
    text = resources.files("spaml.data").joinpath(DEFAULT_STOPWORDS_RESOURCE).read_text("utf-8")
    return StopwordSet.from_lines(text.splitlines(), f"builtin:{DEFAULT_STOPWORDS_RESOURCE}")


def tokenize(text: str) -> list[str]:
    """Lowercase ``text`` and return its alphanumeric runs.

    >>> tokenize("WIN £1000 now!!!")
    ['win', '1000', 'now']
    """
    return _TOKEN_RE.findall(text.lower())


def remove_stopwords(tokens: list[str], stopwords: StopwordSet) -> list[str]:
    return [t for t in tokens if t not in stopwords]


@lru_cache(maxsize=65536)
def stem_word(token: str) -> str:
    if token.isdigit():
        return token
    return _stemmer.stem(token, to_lowercase=False)


def stem(tokens: list[str]) -> list[str]:
    return [stem_word(t) for t in tokens]


def preprocess_pipeline(text: str, stopwords: StopwordSet) -> list[str]:
    """tokenize (lowercasing) -> remove_stopwords -> stem, in that order.

    A stem can itself be a stop word ("others" -> "other"), so stems are
    filtered once more to keep stop words out of the output entirely.
    """
    stems = stem(remove_stopwords(tokenize(text), stopwords))
    return [t for t in stems if t not in stopwords]
