import numpy as np
import pytest

from zoner.corpus import Corpus, Obituary, Sentence
from zoner.segmentation import tokenize
from zoner.zones import ZONES, Zone


def make_sentence(index, text, gold=None):
    return Sentence(index=index, text=text, tokens=tokenize(text), gold=gold)


def make_doc(doc_id, labeled_texts, source="US"):
    """labeled_texts: list of (text, Zone-or-None)."""
    sentences = [make_sentence(i, text, gold) for i, (text, gold) in enumerate(labeled_texts)]
    raw = " ".join(s.text for s in sentences)
    return Obituary(id=doc_id, source=source, raw_text=raw, sentences=sentences)


def toy_marker_corpus(n_sentences=200, seed=7, marker_reps=2, n_fillers=30,
                      sentences_per_doc=4):
    """Synthetic separable corpus: every class has a unique marker token."""
    rng = np.random.default_rng(seed)
    fillers = [f"w{i}" for i in range(n_fillers)]
    markers = {z: f"mark{z.value.lower()}" for z in ZONES}
    docs = []
    sent_idx = 0
    doc_count = 0
    while sent_idx < n_sentences:
        sents = []
        for j in range(min(sentences_per_doc, n_sentences - sent_idx)):
            zone = ZONES[int(rng.integers(0, len(ZONES)))]
            toks = [markers[zone]] * marker_reps + list(
                rng.choice(fillers, size=int(rng.integers(4, 8)))
            )
            rng.shuffle(toks)
            text = " ".join(toks) + "."
            sents.append(make_sentence(j, text, zone))
            sent_idx += 1
        docs.append(
            Obituary(
                id=f"doc{doc_count}",
                source="US",
                raw_text=" ".join(s.text for s in sents),
                sentences=sents,
            )
        )
        doc_count += 1
    return Corpus(docs)


@pytest.fixture
def small_labeled_corpus():
    return Corpus(
        [
            make_doc(
                "a",
                [
                    ("John Doe, 64, of Newport, died on Nov. 22, 2018.", Zone.PI),
                    ("A service will be held Monday at 10 am.", Zone.FI),
                ],
            ),
            make_doc("b", [("Jane Roe passed away peacefully.", Zone.PI)], source="CA"),
        ]
    )


@pytest.fixture
def toy_corpus():
    return toy_marker_corpus()
