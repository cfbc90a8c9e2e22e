import json
import random

import pytest

from zoner.corpus import (
    Corpus,
    Obituary,
    Sentence,
    build_vocabulary,
    load_corpus,
    save_corpus,
    split_corpus,
)
from zoner.errors import (
    DegenerateSplit,
    EmptyVocabulary,
    LabelError,
    ParseError,
)
from zoner.zones import Zone

from conftest import make_doc, make_sentence


def _ids_corpus(n):
    docs = [make_doc(f"d{i}", [("One sentence here.", Zone.PI)]) for i in range(n)]
    return Corpus(docs)


class TestLoadCorpus:
    def test_jsonl_with_labeled_sentences(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            json.dumps(
                {
                    "id": "x",
                    "source": "US",
                    "text": "He died. A service follows.",
                    "sentences": [
                        {"text": "He died.", "label": "PI"},
                        {"text": "A service follows.", "label": "FI"},
                    ],
                }
            )
            + "\n"
        )
        corpus = load_corpus(path)
        assert len(corpus) == 1
        obit = corpus.by_id("x")
        assert [s.gold for s in obit.sentences] == [Zone.PI, Zone.FI]
        assert obit.sentences[0].tokens == ["he", "died", "."]

    def test_jsonl_without_sentences_segments(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            json.dumps({"id": "x", "source": "US", "text": "He died. She wept."}) + "\n"
        )
        obit = load_corpus(path).by_id("x")
        assert [s.text for s in obit.sentences] == ["He died.", "She wept."]
        assert [s.index for s in obit.sentences] == [0, 1]

    def test_unknown_label_raises(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            json.dumps(
                {"id": "x", "sentences": [{"text": "Hi there.", "label": "XX"}]}
            )
            + "\n"
        )
        with pytest.raises(LabelError):
            load_corpus(path)

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "text": "Ok."}\n{broken\n')
        with pytest.raises(ParseError) as exc:
            load_corpus(path)
        assert exc.value.line == 2

    def test_plain_text_dir(self, tmp_path):
        for name in ("alpha", "beta", "gamma"):
            (tmp_path / f"{name}.txt").write_text(f"Document {name}. It is short.")
        corpus = load_corpus(tmp_path, format="plain-text-dir")
        assert sorted(corpus.ids()) == ["alpha", "beta", "gamma"]
        assert len(corpus.by_id("alpha").sentences) == 2

    def test_round_trip(self, tmp_path, small_labeled_corpus):
        path = tmp_path / "rt.jsonl"
        save_corpus(small_labeled_corpus, path)
        loaded = load_corpus(path)
        assert loaded.ids() == small_labeled_corpus.ids()
        for a, b in zip(loaded, small_labeled_corpus):
            assert [s.text for s in a.sentences] == [s.text for s in b.sentences]
            assert [s.gold for s in a.sentences] == [s.gold for s in b.sentences]

    def test_duplicate_ids_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        line = json.dumps({"id": "x", "text": "Hello there."})
        path.write_text(line + "\n" + line + "\n")
        with pytest.raises(ParseError):
            load_corpus(path)


class TestSplitCorpus:
    def test_sizes_n10(self):
        split = split_corpus(_ids_corpus(10), 0.7, 0.3, 0.1, seed=1)
        assert (len(split.test), len(split.val), len(split.train)) == (3, 1, 6)

    def test_sizes_n1008(self):
        split = split_corpus(_ids_corpus(1008), 0.7, 0.3, 0.1, seed=1)
        assert (len(split.test), len(split.val), len(split.train)) == (302, 71, 635)

    def test_deterministic(self):
        corpus = _ids_corpus(25)
        a = split_corpus(corpus, 0.7, 0.3, 0.1, seed=13)
        b = split_corpus(corpus, 0.7, 0.3, 0.1, seed=13)
        assert (a.train, a.val, a.test) == (b.train, b.val, b.test)

    def test_partition_property(self):
        rng = random.Random(0)
        for _ in range(1000):
            n = rng.randint(3, 50)
            corpus = _ids_corpus(n)
            try:
                split = split_corpus(corpus, 0.7, 0.3, 0.1, seed=rng.randint(0, 10**6))
            except DegenerateSplit:
                continue  # tiny corpora can legitimately produce an empty part
            parts = [set(split.train), set(split.val), set(split.test)]
            assert parts[0] | parts[1] | parts[2] == set(corpus.ids())
            assert not (parts[0] & parts[1] or parts[0] & parts[2] or parts[1] & parts[2])

    def test_degenerate_split(self):
        with pytest.raises(DegenerateSplit):
            split_corpus(_ids_corpus(1), 0.7, 0.3, 0.1, seed=1)

    def test_bad_fractions(self):
        with pytest.raises(ValueError):
            split_corpus(_ids_corpus(10), 0.8, 0.3, 0.1, seed=1)

    def test_stratified_keeps_partition(self):
        docs = [
            make_doc(f"d{i}", [("Text here.", Zone.PI)], source="US" if i % 2 else "CA")
            for i in range(20)
        ]
        corpus = Corpus(docs)
        split = split_corpus(corpus, 0.7, 0.3, 0.1, seed=3, stratify_by_source=True)
        all_ids = set(split.train) | set(split.val) | set(split.test)
        assert all_ids == set(corpus.ids())


class TestVocabulary:
    def _corpus(self, texts):
        return Corpus([make_doc("d", [(t, Zone.PI) for t in texts])])

    def test_min_freq(self):
        corpus = self._corpus(["aa aa aa bb."])
        vocab = build_vocabulary(corpus, ["d"], min_freq=2)
        assert vocab.index_of("aa") == 2
        assert vocab.index_of("bb") == 1  # unk
        assert vocab.tokens == ["aa"]

    def test_max_size_keeps_most_frequent(self):
        corpus = self._corpus(["aa aa bb"])
        vocab = build_vocabulary(corpus, ["d"], min_freq=1, max_size=1)
        assert vocab.tokens == ["aa"]

    def test_deterministic(self):
        corpus = self._corpus(["cc aa bb aa."])
        v1 = build_vocabulary(corpus, ["d"])
        v2 = build_vocabulary(corpus, ["d"])
        assert v1.tokens == v2.tokens

    def test_ties_broken_lexicographically(self):
        corpus = self._corpus(["bb aa"])
        vocab = build_vocabulary(corpus, ["d"])
        assert vocab.tokens == ["aa", "bb"]

    def test_round_trip_indices(self):
        corpus = self._corpus(["the quick brown fox. the lazy dog."])
        vocab = build_vocabulary(corpus, ["d"])
        for i in range(2, len(vocab)):
            assert vocab.index_of(vocab.token_of(i)) == i

    def test_no_test_leakage(self):
        docs = [
            make_doc("train", [("only traintoken here.", Zone.PI)]),
            make_doc("test", [("only testtoken here.", Zone.PI)]),
        ]
        vocab = build_vocabulary(Corpus(docs), ["train"])
        assert "traintoken" in vocab
        assert "testtoken" not in vocab

    def test_empty_raises(self):
        corpus = self._corpus(["aa"])
        with pytest.raises(EmptyVocabulary):
            build_vocabulary(corpus, ["d"], min_freq=99)
