"""Corpus data model, ingestion, deterministic splits, and vocabulary."""

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    DegenerateSplit,
    EmptyVocabulary,
    LabelError,
    ParseError,
)
from .segmentation import segment_sentences, tokenize
from .zones import Zone

PAD_INDEX = 0
UNK_INDEX = 1
PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"


@dataclass
class Sentence:
    index: int
    text: str
    tokens: list
    gold: Zone | None = None


@dataclass
class Obituary:
    id: str
    source: str
    raw_text: str
    sentences: list = field(default_factory=list)


@dataclass
class Corpus:
    obituaries: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.obituaries)

    def __len__(self):
        return len(self.obituaries)

    def by_id(self, doc_id):
        for obit in self.obituaries:
            if obit.id == doc_id:
                return obit
        raise KeyError(doc_id)

    def ids(self):
        return [obit.id for obit in self.obituaries]

    def subset(self, ids):
        wanted = set(ids)
        return Corpus([o for o in self.obituaries if o.id in wanted])


def _sentences_from_text(raw_text):
    sentences = []
    for i, text in enumerate(segment_sentences(raw_text)):
        sentences.append(Sentence(index=i, text=text, tokens=tokenize(text)))
    return sentences


def _obituary_from_record(record, line_no):
    doc_id = record.get("id")
    if not doc_id:
        raise ParseError("record has no 'id'", line=line_no)
    source = record.get("source", "")
    raw_text = record.get("text", "")
    if record.get("sentences"):
        sentences = []
        for i, sent in enumerate(record["sentences"]):
            text = sent["text"]
            label = sent.get("label")
            gold = None
            if label is not None:
                try:
                    gold = Zone.parse(label)
                except LabelError:
                    raise LabelError(
                        f"doc {doc_id!r} sentence {i}: unknown label {label!r}"
                    ) from None
            sentences.append(Sentence(index=i, text=text, tokens=tokenize(text), gold=gold))
        if not raw_text:
            raw_text = " ".join(s.text for s in sentences)
    else:
        sentences = _sentences_from_text(raw_text)
    return Obituary(id=doc_id, source=source, raw_text=raw_text, sentences=sentences)


def load_corpus(path, format="jsonl"):
    """Load a corpus from a JSONL file or a directory of plain-text files."""
    path = Path(path)
    obituaries = []
    if format == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"malformed JSON ({exc.msg})", line=line_no) from None
                obituaries.append(_obituary_from_record(record, line_no))
    elif format == "plain-text-dir":
        for file in sorted(path.glob("*.txt")):
            raw_text = file.read_text("utf-8")
            obituaries.append(
                Obituary(
                    id=file.stem,
                    source="",
                    raw_text=raw_text,
                    sentences=_sentences_from_text(raw_text),
                )
            )
    else:
        raise ValueError(f"unknown corpus format: {format!r}")
    seen = set()
    for obit in obituaries:
        if obit.id in seen:
            raise ParseError(f"duplicate document id {obit.id!r}")
        seen.add(obit.id)
    return Corpus(obituaries)


def save_corpus(corpus, path):
    """Write the corpus in the documented JSONL schema."""
    with open(path, "w", encoding="utf-8") as fh:
        for obit in corpus:
            record = {
                "id": obit.id,
                "source": obit.source,
                "text": obit.raw_text,
                "sentences": [
                    {"text": s.text, "label": s.gold.value if s.gold else None}
                    for s in obit.sentences
                ],
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


@dataclass
class DatasetSplit:
    train: list
    val: list
    test: list
    seed: int

    def to_dict(self):
        return {"train": self.train, "val": self.val, "test": self.test, "seed": self.seed}

    @classmethod
    def from_dict(cls, data):
        return cls(train=data["train"], val=data["val"], test=data["test"], seed=data["seed"])


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def _partition_ids(ids, test_frac, val_frac_of_train, rng):
    ids = list(ids)
    rng.shuffle(ids)
    n = len(ids)
    n_test = _round_half_up(test_frac * n)
    n_val = _round_half_up(val_frac_of_train * (n - n_test))
    test = ids[:n_test]
    val = ids[n_test : n_test + n_val]
    train = ids[n_test + n_val :]
    return train, val, test


def split_corpus(corpus, train_frac, test_frac, val_frac_of_train, seed,
                 stratify_by_source=False):
    """Document-level seeded split into train/val/test id lists.

    Test is sized first (round half up), then validation is carved out of the
    remaining training documents.
    """
    if abs(train_frac + test_frac - 1.0) > 1e-9:
        raise ValueError("train_frac + test_frac must equal 1")
    if not (0 < train_frac < 1 and 0 < test_frac < 1):
        raise ValueError("fractions must lie in (0, 1)")
    if len(corpus) == 0:
        raise DegenerateSplit("corpus is empty")
    rng = random.Random(seed)
    if stratify_by_source:
        groups = {}
        for obit in corpus:
            groups.setdefault(obit.source, []).append(obit.id)
        train, val, test = [], [], []
        for source in sorted(groups):
            tr, va, te = _partition_ids(groups[source], test_frac, val_frac_of_train, rng)
            train += tr
            val += va
            test += te
    else:
        train, val, test = _partition_ids(corpus.ids(), test_frac, val_frac_of_train, rng)
    if not train or not val or not test:
        raise DegenerateSplit(
            f"split produced an empty part (train={len(train)}, val={len(val)}, test={len(test)})"
        )
    return DatasetSplit(train=train, val=val, test=test, seed=seed)


class Vocabulary:
    """Token/index bijection with reserved padding (0) and unknown (1) slots."""

    def __init__(self, tokens):
        self._index_to_token = [PAD_TOKEN, UNK_TOKEN] + list(tokens)
        self._token_to_index = {t: i for i, t in enumerate(self._index_to_token)}

    def __len__(self):
        return len(self._index_to_token)

    def __contains__(self, token):
        return token in self._token_to_index

    def index_of(self, token):
        return self._token_to_index.get(token, UNK_INDEX)

    def token_of(self, index):
        return self._index_to_token[index]

    def encode(self, tokens):
        return [self.index_of(t) for t in tokens]

    @property
    def tokens(self):
        """Non-reserved tokens in index order."""
        return self._index_to_token[2:]

    def to_dict(self):
        return {"tokens": self.tokens}

    @classmethod
    def from_dict(cls, data):
        return cls(data["tokens"])


def build_vocabulary(corpus, ids, min_freq=1, max_size=None):
    """Frequency-ordered vocabulary over the given training documents only."""
    wanted = set(ids)
    unknown = wanted - set(corpus.ids())
    if unknown:
        raise ValueError(f"ids not in corpus: {sorted(unknown)}")
    freq = {}
    for obit in corpus:
        if obit.id not in wanted:
            continue
        for sentence in obit.sentences:
            for token in sentence.tokens:
                freq[token] = freq.get(token, 0) + 1
    kept = sorted(
        (t for t, c in freq.items() if c >= min_freq),
        key=lambda t: (-freq[t], t),
    )
    if max_size is not None:
        kept = kept[:max_size]
    if not kept:
        raise EmptyVocabulary("no tokens meet the frequency threshold")
    return Vocabulary(kept)
