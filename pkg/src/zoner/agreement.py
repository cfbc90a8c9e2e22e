"""Inter-annotator agreement: pairwise Cohen's kappa and Fleiss' kappa."""

import csv
import io
import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InputError, InsufficientOverlap, MatrixError, ParseError
from .zones import ZONES, Zone


@dataclass
class AnnotationRecord:
    doc_id: str
    sentence_idx: int
    annotator: str
    label: Zone
    rev: int = 1
    ts: str = ""

    def key(self):
        return (self.doc_id, self.sentence_idx, self.annotator)

    def to_dict(self):
        return {
            "doc_id": self.doc_id,
            "sentence_idx": self.sentence_idx,
            "annotator": self.annotator,
            "label": self.label.value,
            "rev": self.rev,
            "ts": self.ts,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            doc_id=data["doc_id"],
            sentence_idx=int(data["sentence_idx"]),
            annotator=data["annotator"],
            label=Zone.parse(data["label"]),
            rev=int(data.get("rev", 1)),
            ts=data.get("ts", ""),
        )


def load_annotations(path):
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"malformed JSON ({exc.msg})", line=line_no) from None
            records.append(AnnotationRecord.from_dict(data))
    return records


def latest_records(records):
    """Collapse to the highest-rev record per (doc, sentence, annotator)."""
    latest = {}
    for rec in records:
        cur = latest.get(rec.key())
        if cur is None or rec.rev > cur.rev:
            latest[rec.key()] = rec
    return latest


@dataclass
class AnnotationMatrix:
    items: list                       # (doc_id, sentence_idx)
    counts: np.ndarray                # items x 8, annotator votes per zone
    n: int                            # annotators per item

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 2:
            raise MatrixError("counts must be 2-dimensional")
        if (self.counts < 0).any():
            raise MatrixError("counts must be non-negative")
        sums = self.counts.sum(axis=1)
        if len(sums) and not (sums == self.n).all():
            raise MatrixError("every row must sum to the number of annotators")

    def binarize(self, column):
        """Collapse to two categories: the given column vs everything else."""
        pos = self.counts[:, column]
        return AnnotationMatrix(self.items, np.stack([pos, self.n - pos], axis=1), self.n)


def cohen_kappa(labels_a, labels_b):
    """Chance-corrected agreement between two label sequences."""
    if len(labels_a) != len(labels_b):
        raise InputError("label sequences differ in length")
    if not labels_a:
        raise InputError("label sequences are empty")
    n = len(labels_a)
    p_o = sum(a == b for a, b in zip(labels_a, labels_b)) / n
    p_e = 0.0
    for zone in ZONES:
        pa = sum(a == zone for a in labels_a) / n
        pb = sum(b == zone for b in labels_b) / n
        p_e += pa * pb
    if p_e >= 1.0:
        return 1.0
    return (p_o - p_e) / (1.0 - p_e)


def fleiss_kappa(matrix):
    """Fleiss' kappa over an item x category vote-count matrix."""
    counts = matrix.counts
    n = matrix.n
    if counts.shape[0] < 2:
        raise InputError("need at least 2 items")
    if n < 2:
        raise InputError("need at least 2 annotators")
    p_i = ((counts * counts).sum(axis=1) - n) / (n * (n - 1))
    p_bar = p_i.mean()
    p_j = counts.sum(axis=0) / counts.sum()
    p_e = float((p_j * p_j).sum())
    if 1.0 - p_e == 0.0:
        if p_bar == 1.0:
            return 1.0
        raise InputError("degenerate chance agreement without perfect agreement")
    return float((p_bar - p_e) / (1.0 - p_e))


def kappa_by_class(matrix, zone):
    """One-vs-rest Fleiss' kappa for a single zone.

    Returns None (undefined) when no annotator ever used the zone.
    """
    column = zone.index
    if matrix.counts[:, column].sum() == 0:
        return None
    return fleiss_kappa(matrix.binarize(column))


def build_matrix(records, annotators=None):
    """Item x zone vote matrix over items labeled by every annotator."""
    latest = latest_records(records)
    if annotators is None:
        annotators = sorted({rec.annotator for rec in latest.values()})
    annotators = list(annotators)
    if len(annotators) < 2:
        raise InsufficientOverlap("fewer than 2 annotators")
    by_item = {}
    for rec in latest.values():
        if rec.annotator in annotators:
            by_item.setdefault((rec.doc_id, rec.sentence_idx), {})[rec.annotator] = rec.label
    items = sorted(item for item, labels in by_item.items() if len(labels) == len(annotators))
    if not items:
        raise InsufficientOverlap("no item is labeled by all annotators")
    counts = np.zeros((len(items), len(ZONES)), dtype=np.int64)
    for i, item in enumerate(items):
        for label in by_item[item].values():
            counts[i, label.index] += 1
    return AnnotationMatrix(items, counts, len(annotators))


@dataclass
class AgreementReport:
    annotators: list
    n_items: int
    fleiss: float
    pairwise: dict = field(default_factory=dict)   # (a, b) -> kappa
    per_class: dict = field(default_factory=dict)  # Zone -> kappa or None
    per_source: dict = field(default_factory=dict) # source -> kappa or None

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["measure", "key", "kappa"])
        writer.writerow(["fleiss", "overall", f"{self.fleiss:.4f}"])
        for (a, b), k in sorted(self.pairwise.items()):
            writer.writerow(["cohen", f"{a}|{b}", f"{k:.4f}"])
        for zone in ZONES:
            k = self.per_class.get(zone)
            writer.writerow(["fleiss", zone.value, "" if k is None else f"{k:.4f}"])
        for source, k in sorted(self.per_source.items()):
            writer.writerow(["fleiss", f"source:{source}", "" if k is None else f"{k:.4f}"])
        return buf.getvalue()

    def to_markdown(self):
        lines = ["| Class | kappa |", "| --- | --- |"]
        for zone in ZONES:
            k = self.per_class.get(zone)
            lines.append(f"| {zone.value} | {'—' if k is None else format(k, '.2f')} |")
        lines.append(f"| All | {self.fleiss:.2f} |")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "annotators": self.annotators,
            "n_items": self.n_items,
            "fleiss": self.fleiss,
            "pairwise": {f"{a}|{b}": k for (a, b), k in self.pairwise.items()},
            "per_class": {z.value: self.per_class.get(z) for z in ZONES},
            "per_source": dict(self.per_source),
        }


def agreement_report(records, corpus=None):
    """Overall Fleiss, all pairwise Cohen, per-class and per-source kappas."""
    matrix = build_matrix(records)
    latest = latest_records(records)
    annotators = sorted({rec.annotator for rec in latest.values()})

    pairwise = {}
    for a, b in combinations(annotators, 2):
        shared = {}
        for rec in latest.values():
            if rec.annotator in (a, b):
                shared.setdefault((rec.doc_id, rec.sentence_idx), {})[rec.annotator] = rec.label
        items = sorted(item for item, labels in shared.items() if len(labels) == 2)
        if items:
            labels_a = [shared[item][a] for item in items]
            labels_b = [shared[item][b] for item in items]
            pairwise[(a, b)] = cohen_kappa(labels_a, labels_b)

    per_class = {zone: kappa_by_class(matrix, zone) for zone in ZONES}

    per_source = {}
    if corpus is not None:
        source_of = {obit.id: obit.source for obit in corpus}
        groups = {}
        for i, (doc_id, _) in enumerate(matrix.items):
            groups.setdefault(source_of.get(doc_id, ""), []).append(i)
        for source, rows in sorted(groups.items()):
            if len(rows) >= 2:
                sub = AnnotationMatrix(
                    [matrix.items[i] for i in rows], matrix.counts[rows], matrix.n
                )
                try:
                    per_source[source] = fleiss_kappa(sub)
                except InputError:
                    per_source[source] = None
            else:
                per_source[source] = None

    return AgreementReport(
        annotators=annotators,
        n_items=len(matrix.items),
        fleiss=fleiss_kappa(matrix),
        pairwise=pairwise,
        per_class=per_class,
        per_source=per_source,
    )
