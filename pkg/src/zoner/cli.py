"""Command-line entry point for the full zoning pipeline."""

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .agreement import agreement_report, load_annotations
from .corpus import DatasetSplit, load_corpus, save_corpus, split_corpus
from .errors import ZonerError
from .evaluation import confusion, error_export, metrics
from .models import MODEL_TYPES, ZoningModel
from .stats import corpus_stats
from .training import train
from .zones import Zone

log = logging.getLogger("zoner")

DEFAULT_SEED = 13


def _seed_default():
    env = os.environ.get("ZONER_SEED")
    return int(env) if env else DEFAULT_SEED


def write_atomic(path, text):
    """Write via temp file + rename so partial files are never observed."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _save_model_atomic(model, path):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    os.close(fd)
    try:
        model.save(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_ingest(args):
    corpus = load_corpus(args.input, format=args.format)
    tmp_target = Path(args.out)
    fd, tmp = tempfile.mkstemp(dir=tmp_target.parent or Path("."),
                               prefix=f".{tmp_target.name}.")
    os.close(fd)
    save_corpus(corpus, tmp)
    os.replace(tmp, tmp_target)
    print(f"ingested {len(corpus)} documents -> {args.out}")
    return 0


def cmd_stats(args):
    corpus = load_corpus(args.corpus)
    report = corpus_stats(corpus)
    print(report.to_table(), end="")
    if args.csv:
        write_atomic(args.csv, report.to_csv())
    if args.table:
        write_atomic(args.table, report.to_table())
    if args.figure:
        from .plots import plot_stats

        plot_stats(report, args.figure)
    return 0


def cmd_split(args):
    corpus = load_corpus(args.corpus)
    split = split_corpus(
        corpus,
        train_frac=args.train_frac,
        test_frac=args.test_frac,
        val_frac_of_train=args.val_frac,
        seed=args.seed,
        stratify_by_source=args.stratify_by_source,
    )
    write_atomic(args.out, json.dumps(split.to_dict(), indent=2) + "\n")
    print(
        f"split seed={args.seed}: train={len(split.train)} "
        f"val={len(split.val)} test={len(split.test)} -> {args.out}"
    )
    return 0


def cmd_train(args):
    print(f"train model={args.model} seed={args.seed} epochs={args.epochs} "
          f"batch={args.batch}")
    corpus = load_corpus(args.corpus)
    with open(args.split, encoding="utf-8") as fh:
        split = DatasetSplit.from_dict(json.load(fh))
    embedding_table = None
    overrides = json.loads(args.config) if args.config else {}
    if args.model in ("bilstm-w2v", "bilstm-crf"):
        if not args.embeddings:
            raise ZonerError(f"model {args.model} requires --embeddings")
    if args.embeddings:
        from .corpus import build_vocabulary
        from .embeddings import load_embeddings

        vocab = build_vocabulary(corpus, split.train, min_freq=args.min_freq)
        embedding_table = load_embeddings(args.embeddings, vocab)
        result = train(args.model, corpus, split, config_overrides=overrides,
                       seed=args.seed, epochs=args.epochs, batch_size=args.batch,
                       lr=args.lr, embedding_table=embedding_table, vocab=vocab)
    else:
        result = train(args.model, corpus, split, config_overrides=overrides,
                       seed=args.seed, epochs=args.epochs, batch_size=args.batch,
                       lr=args.lr, min_freq=args.min_freq)
    _save_model_atomic(result.model, args.out)
    history_payload = {"best_epoch": result.best_epoch, "epochs": result.history}
    if args.history:
        write_atomic(args.history, json.dumps(history_payload, indent=2) + "\n")
    if args.figure:
        from .plots import plot_history

        plot_history(result.history, args.figure)
    print(f"best epoch {result.best_epoch} "
          f"(val loss {result.history[result.best_epoch - 1]['val_loss']:.4f}) "
          f"-> {args.out}")
    return 0


def _predictions(model, corpus):
    return {obit.id: model.predict_document(obit) for obit in corpus}


def cmd_eval(args):
    model = ZoningModel.load(args.model)
    corpus = load_corpus(args.test)
    predictions = _predictions(model, corpus)
    gold, pred = [], []
    for obit in corpus:
        for sentence, p in zip(obit.sentences, predictions[obit.id]):
            if sentence.gold is not None:
                gold.append(sentence.gold)
                pred.append(p)
    matrix = confusion(gold, pred)
    report = metrics(matrix)
    print(report.to_csv(), end="")
    if args.report:
        write_atomic(args.report, report.to_json() + "\n")
    if args.report_csv:
        write_atomic(args.report_csv, report.to_csv())
    if args.confusion:
        write_atomic(args.confusion, matrix.to_csv())
    if args.errors:
        write_atomic(args.errors, error_export(corpus, predictions))
    if args.figure:
        from .plots import plot_confusion

        plot_confusion(matrix, args.figure)
    return 0


def cmd_predict(args):
    model = ZoningModel.load(args.model)
    corpus = load_corpus(args.input)
    lines = []
    for obit in corpus:
        zones = model.predict_document(obit)
        lines.append(json.dumps({"id": obit.id, "labels": [z.value for z in zones]}))
    write_atomic(args.out, "\n".join(lines) + "\n")
    print(f"predicted {len(corpus)} documents -> {args.out}")
    return 0


def cmd_agree(args):
    records = load_annotations(args.annotations)
    corpus = load_corpus(args.corpus) if args.corpus else None
    report = agreement_report(records, corpus)
    print(report.to_markdown(), end="")
    print(f"overall Fleiss kappa: {report.fleiss:.4f} over {report.n_items} items")
    if args.csv:
        write_atomic(args.csv, report.to_csv())
    if args.markdown:
        write_atomic(args.markdown, report.to_markdown())
    return 0


def cmd_gradcheck(args):
    from .nn.gradcheck import run_suite

    results = run_suite(trials=args.trials, seed=args.seed)
    worst = 0.0
    for name, err in results.items():
        status = "ok" if err < args.tol else "FAIL"
        print(f"{name:<14} max relative error {err:.3e}  [{status}]")
        worst = max(worst, err)
    if worst >= args.tol:
        raise ZonerError(f"gradient check failed: max error {worst:.3e} >= {args.tol}")
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app
    from .store import AnnotationStore

    corpus = load_corpus(args.corpus)
    store = AnnotationStore(args.annotations, corpus)
    app = create_app(corpus, store, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="zoner", description="Obituary zoning toolkit"
    )
    parser.add_argument("--version", action="version", version=f"zoner {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="normalize raw input into corpus JSONL")
    p.add_argument("input")
    p.add_argument("--format", choices=["jsonl", "plain-text-dir"], default="jsonl")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("stats", help="per-source, per-zone sentence statistics")
    p.add_argument("corpus")
    p.add_argument("--csv")
    p.add_argument("--table")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("split", help="deterministic train/val/test split")
    p.add_argument("corpus")
    p.add_argument("--seed", type=int, default=_seed_default())
    p.add_argument("--train-frac", type=float, default=0.7)
    p.add_argument("--test-frac", type=float, default=0.3)
    p.add_argument("--val-frac", type=float, default=0.1,
                   help="fraction of the training part used for validation")
    p.add_argument("--stratify-by-source", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="train one of the four models")
    p.add_argument("--corpus", required=True)
    p.add_argument("--split", required=True)
    p.add_argument("--model", choices=MODEL_TYPES, required=True)
    p.add_argument("--seed", type=int, default=_seed_default())
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--batch", type=int, default=8)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--min-freq", type=int, default=1)
    p.add_argument("--embeddings", help="word2vec text-format file")
    p.add_argument("--config", help="JSON object of config overrides")
    p.add_argument("--out", required=True, help="checkpoint path (.zmc)")
    p.add_argument("--history", help="loss history JSON path")
    p.add_argument("--figure", help="loss curve figure path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint on a labeled corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--report-csv", help="CSV report path")
    p.add_argument("--confusion", help="confusion matrix CSV path")
    p.add_argument("--errors", help="misclassification TSV path")
    p.add_argument("--figure", help="confusion matrix figure path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="predict zones for a corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("agree", help="inter-annotator agreement report")
    p.add_argument("--annotations", required=True)
    p.add_argument("--corpus")
    p.add_argument("--csv")
    p.add_argument("--markdown")
    p.set_defaults(func=cmd_agree)

    p = sub.add_parser("gradcheck", help="finite-difference gradient verification")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=_seed_default())
    p.add_argument("--tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--corpus", required=True)
    p.add_argument("--annotations", required=True, help="annotation log JSONL")
    p.add_argument("--static", help="directory of built UI assets")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def run(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return args.func(args)
    except (ZonerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
