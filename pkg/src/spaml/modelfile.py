"""Versioned JSON model files for a fitted ensemble.

Layout (keys in this order)::

    magic, format_version, mode, seed, config_digest, config,
    stopwords {source, words}, lexicon {terms, doc_freq, total_docs, max_terms},
    members {MNB: {...}, LR: {...}, ...}

Floats are written with Python's shortest round-trip repr, so
save -> load -> save reproduces the file byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path

from .classifiers import LearnerKind, model_from_dict
from .ensemble import MEMBER_ORDER, EnsembleModel, SpamlConfig, config_digest
from .preprocess import StopwordSet
from .vectorize import Lexicon, VectorizerMode

MAGIC = "spaml-model"
FORMAT_VERSION = 1


class ModelFileError(ValueError):
    pass


def model_to_dict(model: EnsembleModel) -> dict:
    lex = model.lexicon
    return {
        "magic": MAGIC,
        "format_version": FORMAT_VERSION,
        "mode": model.mode.value,
        "seed": model.seed,
        "config_digest": model.config_digest,
        "config": model.config.to_dict(),
        "stopwords": {
            "source": model.stopwords.source,
            "words": sorted(model.stopwords.words),
        },
        "lexicon": {
            "terms": list(lex.terms),
            "doc_freq": list(lex.doc_freq),
            "total_docs": lex.total_docs,
            "max_terms": lex.max_terms,
        },
        "members": {kind.value: model.members[kind].to_dict() for kind in MEMBER_ORDER},
    }


def dumps(model: EnsembleModel) -> str:
    return json.dumps(model_to_dict(model), indent=1, ensure_ascii=False, allow_nan=False) + "\n"


def model_from_data(data: dict) -> EnsembleModel:
    if not isinstance(data, dict) or data.get("magic") != MAGIC:
        raise ModelFileError("not a spaml model file (bad magic)")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFileError(
            f"unsupported model format_version {version!r}; this build reads version {FORMAT_VERSION}"
        )
    try:
        mode = VectorizerMode(data["mode"])
        seed = int(data["seed"])
        config = SpamlConfig.from_dict(data["config"])
        sw = data["stopwords"]
        stopwords = StopwordSet(frozenset(sw["words"]), sw["source"])
        lx = data["lexicon"]
        lexicon = Lexicon(tuple(lx["terms"]), tuple(lx["doc_freq"]), int(lx["total_docs"]), int(lx["max_terms"]))
        blocks = data["members"]
        unknown = set(blocks) - {k.value for k in MEMBER_ORDER}
        if unknown:
            raise ModelFileError(f"unknown member blocks {sorted(unknown)}")
        members = {LearnerKind(name): model_from_dict(name, block) for name, block in blocks.items()}
        digest = config_digest(mode, config, seed, stopwords)
        if digest != data["config_digest"]:
            raise ModelFileError("config_digest does not match the stored hyperparameters")
        return EnsembleModel(mode, lexicon, members, config, seed, stopwords, digest)
    except ModelFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFileError(f"corrupt model file: {exc!r}") from exc


def loads(text: str) -> EnsembleModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"model file is not valid JSON: {exc}") from exc
    return model_from_data(data)


def save_model(model: EnsembleModel, path) -> None:
    Path(path).write_text(dumps(model), encoding="utf-8")


def load_model(path) -> EnsembleModel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ModelFileError(f"{path}: not a text model file") from exc
    try:
        return loads(text)
    except ModelFileError as exc:
        raise ModelFileError(f"{path}: {exc}") from exc
