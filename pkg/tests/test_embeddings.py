import numpy as np
import pytest

from zoner.corpus import Corpus, build_vocabulary
from zoner.embeddings import load_embeddings
from zoner.errors import DimError, ParseError
from zoner.zones import Zone

from conftest import make_doc


@pytest.fixture
def vocab():
    corpus = Corpus([make_doc("d", [("golf hockey tennis", Zone.C)])])
    return build_vocabulary(corpus, ["d"])


def test_known_token_row(tmp_path, vocab):
    path = tmp_path / "emb.txt"
    path.write_text("golf 0.1 0.2\n")
    table = load_embeddings(path, vocab)
    assert table[vocab.index_of("golf")].tolist() == pytest.approx([0.1, 0.2])


def test_absent_token_zero_row(tmp_path, vocab):
    path = tmp_path / "emb.txt"
    path.write_text("golf 0.1 0.2\n")
    table = load_embeddings(path, vocab)
    assert np.allclose(table[vocab.index_of("hockey")], 0.0)
    assert np.allclose(table[0], 0.0)  # padding row


def test_header_line_skipped(tmp_path, vocab):
    path = tmp_path / "emb.txt"
    path.write_text("2 3\ngolf 1 2 3\nhockey 4 5 6\n")
    table = load_embeddings(path, vocab)
    assert table.shape == (len(vocab), 3)
    assert table[vocab.index_of("hockey")].tolist() == [4.0, 5.0, 6.0]


def test_wrong_arity_raises(tmp_path, vocab):
    path = tmp_path / "emb.txt"
    path.write_text("golf 0.1 0.2\nhockey 0.3\n")
    with pytest.raises((ParseError, DimError)):
        load_embeddings(path, vocab)


def test_non_numeric_value_raises(tmp_path, vocab):
    path = tmp_path / "emb.txt"
    path.write_text("golf abc def\n")
    with pytest.raises(ParseError) as exc:
        load_embeddings(path, vocab)
    assert exc.value.line == 1


def test_rows_match_file_exactly(tmp_path, vocab):
    rng = np.random.default_rng(0)
    lines = []
    expected = {}
    for token in ("golf", "hockey", "tennis"):
        vec = rng.normal(size=4).astype(np.float32)
        expected[token] = vec
        lines.append(token + " " + " ".join(repr(float(v)) for v in vec))
    path = tmp_path / "emb.txt"
    path.write_text("\n".join(lines) + "\n")
    table = load_embeddings(path, vocab)
    for token, vec in expected.items():
        assert np.array_equal(table[vocab.index_of(token)], vec)
