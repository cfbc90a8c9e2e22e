"""Deterministic mini-batch training loop for all four model types."""

import logging
from dataclasses import dataclass, field

import numpy as np

from .corpus import build_vocabulary
from .errors import DegenerateSplit, NumericError, UnlabeledSentence
from .iob import tag_index, to_iob
from .models import ZoningModel, build_model, default_config
from .nn.optim import RmsProp

log = logging.getLogger("zoner")


@dataclass
class TrainResult:
    model: ZoningModel
    history: list = field(default_factory=list)  # per-epoch loss dicts
    best_epoch: int = 0


def _sentence_items(corpus, ids, vocab):
    """(token_ids, zone_index) per labeled sentence; unit for CNN batches."""
    items = []
    offenders = []
    for obit in corpus:
        if obit.id not in ids:
            continue
        for sentence in obit.sentences:
            if sentence.gold is None:
                offenders.append((obit.id, sentence.index))
                continue
            token_ids = vocab.encode(sentence.tokens)
            if token_ids:
                items.append((token_ids, sentence.gold.index))
    if offenders:
        raise UnlabeledSentence(offenders)
    return items


def _document_items(corpus, ids, vocab):
    """(token_ids, iob_tag_indices) per document; unit for BiLSTM batches."""
    items = []
    for obit in corpus:
        if obit.id not in ids:
            continue
        tags = to_iob(obit.sentences)
        token_ids = []
        for sentence in obit.sentences:
            token_ids.extend(vocab.encode(sentence.tokens))
        if token_ids:
            items.append((token_ids, [tag_index(t) for t in tags]))
    return items


def _epoch(net, items, order, batch_size, optimizer):
    """One training pass; returns mean per-item loss."""
    total = 0.0
    for start in range(0, len(order), batch_size):
        batch = order[start : start + batch_size]
        optimizer.zero_grads()
        scale = 1.0 / len(batch)
        for idx in batch:
            inputs, target = items[idx]
            loss = net.loss(inputs, target, backward=True, scale=scale)
            if not np.isfinite(loss):
                raise NumericError(
                    f"non-finite loss at batch starting item {start}"
                )
            total += loss
        optimizer.step()
    return total / len(order)


def _mean_loss(net, items):
    if not items:
        return float("nan")
    return sum(net.loss(i, t, backward=False) for i, t in items) / len(items)


def train(model_type, corpus, split, config_overrides=None, seed=13, epochs=20,
          batch_size=8, lr=0.001, embedding_table=None, min_freq=1, max_vocab=None,
          vocab=None):
    """Train a model on the split's training documents.

    Returns the parameters from the best validation-loss epoch. Fully
    deterministic for a fixed seed on one platform.
    """
    for name, part in (("train", split.train), ("val", split.val), ("test", split.test)):
        if not part:
            raise DegenerateSplit(f"{name} part of the split is empty")
    if vocab is None:
        vocab = build_vocabulary(corpus, split.train, min_freq=min_freq,
                                 max_size=max_vocab)
    config = default_config(model_type, len(vocab), config_overrides)
    net = build_model(model_type, config, seed=seed, embedding_table=embedding_table)
    model = ZoningModel(model_type, config, vocab, net)

    make_items = _sentence_items if model_type == "cnn" else _document_items
    train_items = make_items(corpus, set(split.train), vocab)
    val_items = make_items(corpus, set(split.val), vocab)
    if not train_items:
        raise DegenerateSplit("no usable training items")

    optimizer = RmsProp(model.trainable_parameters(), lr=lr)
    rng = np.random.default_rng(seed)
    history = []
    best_val = float("inf")
    best_epoch = 0
    best_state = [p.value.copy() for p in model._state_parameters()]
    for epoch in range(1, epochs + 1):
        order = rng.permutation(len(train_items))
        try:
            train_loss = _epoch(net, train_items, order, batch_size, optimizer)
        except NumericError as exc:
            raise NumericError(f"epoch {epoch}: {exc}") from None
        val_loss = _mean_loss(net, val_items)
        history.append({"epoch": epoch, "train_loss": train_loss, "val_loss": val_loss})
        log.info("epoch %d: train %.4f val %.4f", epoch, train_loss, val_loss)
        if val_loss < best_val:
            best_val = val_loss
            best_epoch = epoch
            best_state = [p.value.copy() for p in model._state_parameters()]
    for p, value in zip(model._state_parameters(), best_state):
        p.value[...] = value
    return TrainResult(model=model, history=history, best_epoch=best_epoch)
