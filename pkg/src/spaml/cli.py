"""Command-line front end: train, evaluate, predict and vectorize-demo."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import eval as ev
from .classifiers import FitError
from .classifiers.knn import METRICS
from .corpus import LABEL_NAMES, CorpusError, load_corpus
from .ensemble import MAJORITY, SpamlConfig, ensemble_fit
from .modelfile import ModelFileError, load_model, save_model
from .preprocess import StopwordSet, default_stopwords, tokenize
from .vectorize import Lexicon, VectorizeError, VectorizerMode, bow_vector, fit_lexicon, idf, tf

# the three toy documents and the lexicon order used by the BoW / TF-IDF tables
DEMO_DOCS = (
    "this is a dog",
    "this is not a dog",
    "a dog is a special pet which is a friendly pet",
)
DEMO_TERMS = ("this", "is", "a", "dog", "not", "special", "pet", "which", "friendly")
# the one printed TF-IDF cell that disagrees with TF x IDF
DEMO_ERRATUM = ("this", 0, 0.036)

# (flag, config section, field, type, help)
HYPERPARAMETERS = (
    ("--mnb-alpha", "mnb", "alpha", float, "MNB additive smoothing"),
    ("--lr-rate", "lr", "learning_rate", float, "LR step size (default: 1/L from the data)"),
    ("--lr-epochs", "lr", "epochs", int, "LR gradient-descent epochs"),
    ("--lr-l2", "lr", "l2", float, "LR L2 penalty"),
    ("--svm-lambda", "svm", "lam", float, "SVM regularization"),
    ("--svm-epochs", "svm", "epochs", int, "SVM passes over the data"),
    ("--gbt-trees", "gbt", "n_trees", int, "GBT number of trees"),
    ("--gbt-depth", "gbt", "max_depth", int, "GBT maximum tree depth"),
    ("--gbt-shrinkage", "gbt", "shrinkage", float, "GBT learning rate"),
    ("--gbt-lambda", "gbt", "reg_lambda", float, "GBT leaf L2 penalty"),
    ("--gbt-gamma", "gbt", "gamma", float, "GBT minimum split gain"),
    ("--knn-k", "knn", "k", int, "KNN neighbor count (odd)"),
    ("--knn-metric", "knn", "metric", str, "KNN distance metric"),
    ("--knn-p", "knn", "p", float, "Minkowski exponent"),
    ("--perceptron-rate", "perceptron", "learning_rate", float, "perceptron learning rate"),
    ("--perceptron-mse", "perceptron", "mse_threshold", float, "perceptron stopping MSE"),
    ("--perceptron-epochs", "perceptron", "max_epochs", int, "perceptron maximum epochs"),
)


class CliError(Exception):
    pass


def _fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"holdout fraction must be in (0, 1), got {value}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _add_common(p: argparse.ArgumentParser, modes=("bow", "tfidf")) -> None:
    p.add_argument("--mode", choices=modes, default="bow", help="vectorizer mode (default: bow)")
    p.add_argument("--seed", type=int, default=42, help="seed for splits and stochastic learners (default: 42)")
    p.add_argument("--stopwords", metavar="PATH", help="stop-word file, one word per line (default: built-in list)")
    p.add_argument("--max-terms", type=_positive_int, help="lexicon size cap (default: 3000)")
    group = p.add_argument_group("learner hyperparameters")
    for flag, _, _, typ, text in HYPERPARAMETERS:
        kw = {"choices": METRICS} if flag == "--knn-metric" else {}
        group.add_argument(flag, type=typ, help=text, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spaml", description="Bimodal (BoW / TF-IDF) majority-vote spam detector."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit the ensemble on a corpus and write a model file")
    p.add_argument("corpus", help="label<TAB>text corpus file")
    p.add_argument("-o", "--output", required=True, metavar="PATH", help="model file to write")
    _add_common(p)

    p = sub.add_parser("evaluate", help="holdout or k-fold evaluation of all learners")
    p.add_argument("corpus", help="label<TAB>text corpus file")
    split = p.add_mutually_exclusive_group()
    split.add_argument("--holdout", type=_fraction, metavar="FRACTION",
                       help="train fraction of a stratified split (default: 0.75)")
    split.add_argument("--cv", type=int, metavar="K", help="k-fold cross-validation instead of a holdout")
    p.add_argument("-o", "--output", metavar="PATH", help="also write CSV records to PATH")
    _add_common(p, modes=("bow", "tfidf", "both"))

    p = sub.add_parser("predict", help="classify messages with a saved model")
    p.add_argument("model", help="model file written by 'train'")
    p.add_argument("text", nargs="*", help="messages to classify (default: one per line from stdin)")
    p.add_argument("--votes", action="store_true", help="also print the seven member votes")
    p.add_argument("-o", "--output", metavar="PATH", help="write predictions to PATH instead of stdout")

    sub.add_parser("vectorize-demo", help="print the BoW/TF-IDF worked example tables")
    return parser


def config_from_args(args) -> SpamlConfig:
    base = SpamlConfig()
    changes = {}
    for flag, section, name, _, _ in HYPERPARAMETERS:
        value = getattr(args, flag.lstrip("-").replace("-", "_"))
        if value is not None:
            changes.setdefault(section, {})[name] = value
    kwargs = {}
    for section, fields in changes.items():
        try:
            kwargs[section] = dataclasses.replace(getattr(base, section), **fields)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    if args.max_terms is not None:
        kwargs["max_terms"] = args.max_terms
    return dataclasses.replace(base, **kwargs)


def _stopwords(args) -> StopwordSet:
    if args.stopwords is None:
        return default_stopwords()
    try:
        return StopwordSet.from_file(args.stopwords)
    except OSError as exc:
        raise CliError(f"cannot read stop-word file {args.stopwords}: {exc.strerror}") from exc


def _corpus(path):
    try:
        return load_corpus(path)
    except FileNotFoundError:
        raise CliError(f"corpus file not found: {path}") from None
    except OSError as exc:
        raise CliError(f"cannot read corpus {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise CliError(f"{path}: not UTF-8 text ({exc.reason})") from exc


def _counts_line(d) -> str:
    counts = d.class_counts()
    return ", ".join(f"{counts[c]} {LABEL_NAMES[c]}" for c in sorted(counts))


def cmd_train(args, out) -> int:
    d = _corpus(args.corpus)
    config = config_from_args(args)
    stopwords = _stopwords(args)
    model = ensemble_fit(d, args.mode, config, args.seed, stopwords)
    save_model(model, args.output)

    X = model.featurize(d.texts)
    y = np.asarray(d.labels)
    votes = model.member_votes(X)
    labels = (votes.sum(axis=1) >= MAJORITY).astype(np.int64)
    report = ev.report_from_votes(labels, votes, y)
    print(f"corpus: {args.corpus} ({len(d)} messages: {_counts_line(d)})", file=out)
    print(f"mode: {model.mode.label}; lexicon: {len(model.lexicon)} terms; seed: {args.seed}", file=out)
    print("training accuracy:", file=out)
    for name, r in report.rows():
        print(f"  {name:<10} {ev.fmt_ratio(r.accuracy)}", file=out)
    print(f"model written to {args.output}", file=out)
    return 0


def cmd_evaluate(args, out) -> int:
    d = _corpus(args.corpus)
    config = config_from_args(args)
    stopwords = _stopwords(args)
    modes = ["bow", "tfidf"] if args.mode == "both" else [args.mode]
    records = []
    print(f"corpus: {args.corpus} ({len(d)} messages: {_counts_line(d)})", file=out)
    if args.cv is not None:
        if args.cv < 2:
            raise CliError(f"--cv needs at least 2 folds, got {args.cv}")
        for mode in modes:
            result = ev.cross_validate(d, mode, config, args.cv, args.seed, stopwords)
            print(file=out)
            print(ev.format_cv(result), file=out)
            for f in result.folds:
                records.extend(ev.report_records(mode, f.report))
    else:
        fraction = 0.75 if args.holdout is None else args.holdout
        reports = {}
        for mode in modes:
            res = ev.holdout_evaluate(d, mode, config, fraction, args.seed, stopwords)
            reports[mode] = res.report
            title = (f"{VectorizerMode(mode).label} holdout: train {res.train_size}, "
                     f"test {res.test_size}, seed {args.seed}")
            print(file=out)
            print(ev.format_report(res.report, title), file=out)
            records.extend(ev.report_records(mode, res.report))
        if len(modes) > 1:
            print(file=out)
            print(ev.format_comparison(reports), file=out)
    if args.output:
        Path(args.output).write_text(ev.records_to_csv(records), encoding="utf-8")
    return 0


def cmd_predict(args, out) -> int:
    model = load_model(args.model)
    texts = args.text if args.text else [line.rstrip("\r\n") for line in sys.stdin]
    lines = []
    if texts:
        labels, votes = model.predict_texts(texts)
        for label, v in zip(labels, votes):
            line = LABEL_NAMES[int(label)]
            if args.votes:
                line += "\t" + ",".join(str(int(b)) for b in v)
            lines.append(line)
    text = "".join(line + "\n" for line in lines)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


def demo_tables() -> dict:
    """Numbers behind the four worked-example tables, rows in ``DEMO_TERMS`` order."""
    docs = [tokenize(t) for t in DEMO_DOCS]
    fitted = fit_lexicon(docs, max_terms=len(DEMO_TERMS))
    order = [fitted.index[t] for t in DEMO_TERMS]
    lex = Lexicon(DEMO_TERMS, tuple(fitted.doc_freq[i] for i in order), fitted.total_docs, len(DEMO_TERMS))
    bow = np.array([bow_vector(doc, lex).toarray() for doc in docs])
    counts = bow.T
    tfs = np.array([[tf(doc, t) for doc in docs] for t in DEMO_TERMS])
    idfs = np.array([idf(lex, t) for t in DEMO_TERMS])
    return {"lexicon": lex, "bow": bow, "counts": counts, "tf": tfs, "idf": idfs, "tfidf": tfs * idfs[:, None]}


def cmd_vectorize_demo(args, out) -> int:
    t = demo_tables()
    names = [f"d{i + 1}" for i in range(len(DEMO_DOCS))]
    for name, doc in zip(names, DEMO_DOCS):
        print(f"{name}: {doc}", file=out)

    def table(title, header, rows):
        print(f"\n{title}", file=out)
        print(ev.align_table(header, rows), file=out)

    table("Bag of words", ("Doc", *DEMO_TERMS),
          [(n, *(int(v) for v in row)) for n, row in zip(names, t["bow"])])
    tf_header = ("Term", *(f"N_{n}" for n in names), *(f"TF_{n}" for n in names))
    tf_rows = []
    for term, c, f in zip(DEMO_TERMS, t["counts"], t["tf"]):
        tf_rows.append((term, *(int(v) for v in c), *(f"{v:.3f}" for v in f)))
    table("Term frequency", tf_header, tf_rows)
    table("Inverse document frequency", ("Term", "docs", "IDF"),
          [(term, df, f"{v:.3f}") for term, df, v in zip(DEMO_TERMS, t["lexicon"].doc_freq, t["idf"])])
    table("TF-IDF", ("Term", *names),
          [(term, *(f"{v:.3f}" for v in row)) for term, row in zip(DEMO_TERMS, t["tfidf"])])
    term, doc, printed = DEMO_ERRATUM
    value = t["tfidf"][DEMO_TERMS.index(term), doc]
    print(
        f"\nnote: TF-IDF({term}, d{doc + 1}) = 1/4 x {t['idf'][0]:.3f} = {value:.3f}; "
        f"the published table prints {printed:.3f}, which does not follow from TF x IDF "
        f"(the neighbouring cell 1/5 x {t['idf'][0]:.3f} = {t['tfidf'][0, 1]:.3f} does).",
        file=out,
    )
    return 0


COMMANDS = {
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "predict": cmd_predict,
    "vectorize-demo": cmd_vectorize_demo,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # argparse binds an empty ``text`` list as soon as MODEL is seen, so
    # messages written after ``--votes`` arrive here
    if extra and args.command == "predict" and not any(e.startswith("-") for e in extra):
        args.text = list(args.text) + extra
    elif extra:
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        return COMMANDS[args.command](args, out)
    except (CliError, CorpusError, ModelFileError, VectorizeError, FitError) as exc:
        print(f"spaml {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"spaml {args.command}: error: no such file: {exc.filename}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"spaml {args.command}: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"spaml {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
