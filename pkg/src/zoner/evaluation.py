"""Per-class precision/recall/F1, macro/micro aggregates, confusion matrix."""

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .zones import ZONES


@dataclass
class ConfusionMatrix:
    counts: np.ndarray  # 8x8, rows gold, columns predicted, canonical order

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        n = len(ZONES)
        if self.counts.shape != (n, n):
            raise InputError(f"confusion matrix must be {n}x{n}")
        if (self.counts < 0).any():
            raise InputError("confusion matrix counts must be non-negative")

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def trace(self):
        return int(np.trace(self.counts))

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["gold\\pred"] + [z.value for z in ZONES])
        for i, zone in enumerate(ZONES):
            writer.writerow([zone.value] + [int(c) for c in self.counts[i]])
        return buf.getvalue()


def confusion(gold, pred):
    """Count matrix over aligned gold/predicted zone sequences."""
    if len(gold) != len(pred):
        raise InputError("gold and predicted sequences differ in length")
    if not gold:
        raise InputError("empty input")
    counts = np.zeros((len(ZONES), len(ZONES)), dtype=np.int64)
    for g, p in zip(gold, pred):
        counts[g.index, p.index] += 1
    return ConfusionMatrix(counts)


@dataclass
class EvalReport:
    precision: dict   # Zone -> float
    recall: dict
    f1: dict
    macro_precision: float
    macro_recall: float
    macro_f1: float
    micro_f1: float
    matrix: ConfusionMatrix

    def to_dict(self):
        return {
            "per_class": {
                z.value: {
                    "precision": self.precision[z],
                    "recall": self.recall[z],
                    "f1": self.f1[z],
                }
                for z in ZONES
            },
            "macro": {
                "precision": self.macro_precision,
                "recall": self.macro_recall,
                "f1": self.macro_f1,
            },
            "micro": {"f1": self.micro_f1},
            "total": self.matrix.total,
            "correct": self.matrix.trace,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["class", "precision", "recall", "f1"])
        for z in ZONES:
            writer.writerow([z.value, f"{self.precision[z]:.4f}",
                             f"{self.recall[z]:.4f}", f"{self.f1[z]:.4f}"])
        writer.writerow(["macro", f"{self.macro_precision:.4f}",
                         f"{self.macro_recall:.4f}", f"{self.macro_f1:.4f}"])
        writer.writerow(["micro", "", "", f"{self.micro_f1:.4f}"])
        return buf.getvalue()


def _safe_div(a, b):
    return a / b if b else 0.0  # 0/0 reported as 0, the never-predicted convention


def metrics(matrix):
    """Per-class and aggregate metrics from a confusion matrix."""
    if matrix.total == 0:
        raise InputError("empty confusion matrix")
    counts = matrix.counts
    precision, recall, f1 = {}, {}, {}
    for i, zone in enumerate(ZONES):
        p = _safe_div(float(counts[i, i]), float(counts[:, i].sum()))
        r = _safe_div(float(counts[i, i]), float(counts[i, :].sum()))
        precision[zone] = p
        recall[zone] = r
        f1[zone] = _safe_div(2 * p * r, p + r)
    n = len(ZONES)
    return EvalReport(
        precision=precision,
        recall=recall,
        f1=f1,
        macro_precision=sum(precision.values()) / n,
        macro_recall=sum(recall.values()) / n,
        macro_f1=sum(f1.values()) / n,
        micro_f1=matrix.trace / matrix.total,
        matrix=matrix,
    )


def error_export(corpus, predictions):
    """TSV of misclassified sentences for manual error tagging.

    predictions maps doc id to one predicted Zone per sentence. The trailing
    error_type column is left empty for hand classification.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(["doc_id", "sentence_idx", "gold", "pred", "text", "error_type"])
    for obit in corpus:
        if obit.id not in predictions:
            continue
        pred = predictions[obit.id]
        if len(pred) != len(obit.sentences):
            raise InputError(
                f"doc {obit.id!r}: {len(pred)} predictions for "
                f"{len(obit.sentences)} sentences"
            )
        for sentence, p in zip(obit.sentences, pred):
            if sentence.gold is not None and sentence.gold != p:
                writer.writerow([obit.id, sentence.index, sentence.gold.value,
                                 p.value, sentence.text, ""])
    return buf.getvalue()
