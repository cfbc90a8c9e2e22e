import pytest

from zoner.corpus import DatasetSplit, split_corpus
from zoner.errors import DegenerateSplit
from zoner.training import train

from conftest import toy_marker_corpus


SMALL_CNN = {"channels": 8}
SMALL_BILSTM = {"hidden": 6, "embedding_dim": 5}


def test_same_seed_identical_history():
    toy = toy_marker_corpus(n_sentences=60)
    split = split_corpus(toy, 0.7, 0.3, 0.1, seed=13)
    r1 = train("cnn", toy, split, config_overrides=SMALL_CNN, seed=13, epochs=3)
    r2 = train("cnn", toy, split, config_overrides=SMALL_CNN, seed=13, epochs=3)
    assert r1.history == r2.history


def test_different_seeds_differ():
    toy = toy_marker_corpus(n_sentences=60)
    split = split_corpus(toy, 0.7, 0.3, 0.1, seed=13)
    r1 = train("cnn", toy, split, config_overrides=SMALL_CNN, seed=13, epochs=2)
    r2 = train("cnn", toy, split, config_overrides=SMALL_CNN, seed=14, epochs=2)
    assert r1.history != r2.history


def test_loss_decreases_early():
    toy = toy_marker_corpus()
    split = split_corpus(toy, 0.7, 0.3, 0.1, seed=13)
    result = train("cnn", toy, split, config_overrides=SMALL_CNN, seed=13,
                   epochs=3, lr=0.01)
    losses = [h["train_loss"] for h in result.history]
    assert losses[1] < losses[0]
    assert losses[2] < losses[1]


def test_bilstm_history_recorded():
    toy = toy_marker_corpus(n_sentences=40)
    split = split_corpus(toy, 0.7, 0.3, 0.1, seed=13)
    result = train("bilstm-bow", toy, split, config_overrides=SMALL_BILSTM,
                   seed=13, epochs=2)
    assert len(result.history) == 2
    assert all("val_loss" in h for h in result.history)
    assert 1 <= result.best_epoch <= 2


def test_empty_split_part_raises():
    toy = toy_marker_corpus(n_sentences=40)
    split = DatasetSplit(train=toy.ids(), val=[], test=[], seed=0)
    with pytest.raises(DegenerateSplit):
        train("cnn", toy, split, config_overrides=SMALL_CNN, seed=13, epochs=1)
