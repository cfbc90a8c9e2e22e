"""The four sentence-zoning models and their checkpoint format."""

import base64
import json
import logging
from dataclasses import asdict, dataclass

import numpy as np

from .corpus import Vocabulary
from .crf import CrfParams, crf_decode, crf_nll
from .errors import EmptyDocument, ShapeError
from .iob import N_TAGS, majority_map, tag_of
from .nn.layers import (
    BiLSTM,
    Conv1d,
    Dense,
    Embedding,
    MaxOverTime,
    MaxPool1d,
    Module,
    ReLU,
    SoftmaxCrossEntropy,
    TokenConv1d,
    softmax,
)
from .zones import ZONES

log = logging.getLogger("zoner")

CHECKPOINT_VERSION = 1
MODEL_TYPES = ("cnn", "bilstm-bow", "bilstm-w2v", "bilstm-crf")


@dataclass
class CnnConfig:
    vocab_size: int
    classes: int = 8
    max_len: int = 350
    blocks: int = 3
    channels: int = 128
    kernel_width: int = 3
    pool_width: int = 2
    conv_per_block: int = 1

    @property
    def min_len(self):
        # smallest input surviving every valid conv + pool stage
        need = 1
        for _ in range(self.blocks):
            need = need * self.pool_width + (self.kernel_width - 1) * self.conv_per_block
        return need


@dataclass
class BiLstmConfig:
    vocab_size: int
    mode: str = "bow"  # bow | w2v
    hidden: int = 100
    embedding_dim: int = 100
    crf: bool = False
    n_tags: int = N_TAGS


class CnnModel(Module):
    """Sentence classifier: token conv blocks, global max, softmax output."""

    def __init__(self, config, rng, dtype=np.float32):
        self.config = config
        pipeline = []
        for b in range(config.blocks):
            for c in range(config.conv_per_block):
                name = f"block{b}.conv{c}"
                if b == 0 and c == 0:
                    conv = TokenConv1d(config.kernel_width, config.vocab_size,
                                       config.channels, rng, dtype, name=name)
                else:
                    conv = Conv1d(config.kernel_width, config.channels,
                                  config.channels, rng, dtype, name=name)
                pipeline.append(conv)
                pipeline.append(ReLU())
            pipeline.append(MaxPool1d(config.pool_width))
        pipeline.append(MaxOverTime())
        pipeline.append(Dense(config.channels, config.classes, rng, dtype, name="out"))
        self.pipeline = pipeline
        self.loss_layer = SoftmaxCrossEntropy()

    def _prepare(self, token_ids):
        if len(token_ids) == 0:
            raise ShapeError("empty token sequence")
        ids = list(token_ids)
        if len(ids) > self.config.max_len:
            log.warning("truncating sentence of %d tokens to %d", len(ids),
                        self.config.max_len)
            ids = ids[: self.config.max_len]
        if len(ids) < self.config.min_len:
            ids = ids + [0] * (self.config.min_len - len(ids))
        return np.asarray(ids, dtype=np.int64)

    def forward_logits(self, token_ids):
        x = self._prepare(token_ids)
        for layer in self.pipeline:
            x = layer.forward(x)
        return x

    def forward(self, token_ids):
        """Probability vector over the eight zones for one sentence."""
        return softmax(self.forward_logits(token_ids))

    def loss(self, token_ids, gold_index, backward=True, scale=1.0):
        logits = self.forward_logits(token_ids)
        loss = self.loss_layer.forward(logits, gold_index)
        if backward:
            d = self.loss_layer.backward(scale)
            for layer in reversed(self.pipeline):
                d = layer.backward(d)
                if d is None:
                    break
        return loss

    def predict(self, token_ids):
        return ZONES[int(np.argmax(self.forward(token_ids)))]


class BiLstmModel(Module):
    """Document-level IOB tagger: embedding, BiLSTM, dense, softmax or CRF."""

    def __init__(self, config, rng, embedding_table=None, dtype=np.float32):
        self.config = config
        if config.mode == "w2v":
            if embedding_table is None:
                raise ValueError("w2v mode requires a pretrained embedding table")
            config.embedding_dim = int(embedding_table.shape[1])
            self.embedding = Embedding(config.vocab_size, config.embedding_dim,
                                       dtype=dtype, trainable=False,
                                       table=embedding_table, name="embed")
        elif config.mode == "bow":
            self.embedding = Embedding(config.vocab_size, config.embedding_dim, rng,
                                       dtype=dtype, trainable=True, name="embed")
        else:
            raise ValueError(f"unknown BiLSTM mode: {config.mode!r}")
        self.bilstm = BiLSTM(config.embedding_dim, config.hidden, rng, dtype)
        self.out = Dense(2 * config.hidden, config.n_tags, rng, dtype, name="out")
        self.crf = CrfParams(config.n_tags, dtype=dtype) if config.crf else None
        self.loss_layer = SoftmaxCrossEntropy()

    def forward_emissions(self, token_ids):
        if len(token_ids) == 0:
            raise ShapeError("empty document")
        x = self.embedding.forward(np.asarray(token_ids, dtype=np.int64))
        x = self.bilstm.forward(x)
        return self.out.forward(x)

    def forward(self, token_ids):
        """Per-token distributions over the 16 IOB tags (softmax head)."""
        return softmax(self.forward_emissions(token_ids))

    def _backprop(self, d_emissions):
        d = self.out.backward(d_emissions)
        d = self.bilstm.backward(d)
        self.embedding.backward(d)

    def loss(self, token_ids, tag_indices, backward=True, scale=1.0):
        emissions = self.forward_emissions(token_ids)
        if self.crf is not None:
            value, d_em = crf_nll(emissions.astype(np.float64), tag_indices, self.crf,
                                  accumulate=backward, scale=scale)
            if backward:
                self._backprop(d_em.astype(emissions.dtype))
            return value
        t = len(tag_indices)
        probs = softmax(emissions)
        gold = np.asarray(tag_indices)
        rows = np.arange(t)
        value = float(-np.log(np.maximum(probs[rows, gold], 1e-12)).mean())
        if backward:
            d = probs.copy()
            d[rows, gold] -= 1.0
            self._backprop(d * (scale / t))
        return value

    def predict_tag_indices(self, token_ids):
        emissions = self.forward_emissions(token_ids)
        if self.crf is not None:
            return crf_decode(emissions.astype(np.float64), self.crf)
        return [int(i) for i in emissions.argmax(axis=1)]


def build_model(model_type, config, seed, embedding_table=None, dtype=np.float32):
    rng = np.random.default_rng(seed)
    if model_type == "cnn":
        return CnnModel(config, rng, dtype=dtype)
    if model_type in ("bilstm-bow", "bilstm-w2v", "bilstm-crf"):
        return BiLstmModel(config, rng, embedding_table=embedding_table, dtype=dtype)
    raise ValueError(f"unknown model type: {model_type!r}")


def default_config(model_type, vocab_size, overrides=None):
    overrides = dict(overrides or {})
    if model_type == "cnn":
        config = CnnConfig(vocab_size=vocab_size)
    elif model_type == "bilstm-bow":
        config = BiLstmConfig(vocab_size=vocab_size, mode="bow")
    elif model_type == "bilstm-w2v":
        config = BiLstmConfig(vocab_size=vocab_size, mode="w2v")
    elif model_type == "bilstm-crf":
        config = BiLstmConfig(vocab_size=vocab_size, mode="w2v", crf=True)
    else:
        raise ValueError(f"unknown model type: {model_type!r}")
    for key, value in overrides.items():
        if not hasattr(config, key):
            raise ValueError(f"unknown config field: {key!r}")
        setattr(config, key, value)
    return config


class ZoningModel:
    """A trained model plus its vocabulary, ready for prediction and saving."""

    def __init__(self, model_type, config, vocab, net):
        self.model_type = model_type
        self.config = config
        self.vocab = vocab
        self.net = net

    # parameters that must round-trip through a checkpoint, including any
    # frozen embedding table
    def _state_parameters(self):
        params = []
        if isinstance(self.net, BiLstmModel):
            params.append(self.net.embedding.weight)
            params += self.net.bilstm.parameters()
            params += self.net.out.parameters()
            if self.net.crf is not None:
                params += self.net.crf.parameters()
        else:
            params = self.net.parameters()
        return params

    def trainable_parameters(self):
        return self.net.parameters()

    def predict_document(self, obituary):
        if not obituary.sentences:
            raise EmptyDocument(f"document {obituary.id!r} has no sentences")
        if self.model_type == "cnn":
            zones = []
            for sentence in obituary.sentences:
                ids = self.vocab.encode(sentence.tokens)
                zones.append(self.net.predict(ids) if ids else ZONES[-1])
            return zones
        doc_ids = []
        lengths = []
        for sentence in obituary.sentences:
            ids = self.vocab.encode(sentence.tokens)
            doc_ids.extend(ids)
            lengths.append(len(ids))
        if not doc_ids:
            raise EmptyDocument(f"document {obituary.id!r} has no tokens")
        tag_indices = self.net.predict_tag_indices(doc_ids)
        zones = []
        pos = 0
        for length in lengths:
            if length == 0:
                zones.append(ZONES[-1])  # tokenless sentence falls back to Other
                continue
            tags = [tag_of(i) for i in tag_indices[pos : pos + length]]
            zones.append(majority_map(tags))
            pos += length
        return zones

    def save(self, path):
        params = {}
        for p in self._state_parameters():
            value = np.ascontiguousarray(p.value, dtype=np.float32)
            params[p.name] = {
                "shape": list(value.shape),
                "data": base64.b64encode(value.astype("<f4").tobytes()).decode("ascii"),
            }
        manifest = {
            "format_version": CHECKPOINT_VERSION,
            "model_type": self.model_type,
            "config": asdict(self.config),
            "vocabulary": self.vocab.to_dict(),
            "params": params,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        if manifest.get("format_version") != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version: "
                             f"{manifest.get('format_version')!r}")
        model_type = manifest["model_type"]
        vocab = Vocabulary.from_dict(manifest["vocabulary"])
        if model_type == "cnn":
            config = CnnConfig(**manifest["config"])
        else:
            config = BiLstmConfig(**manifest["config"])
        table = None
        if model_type in ("bilstm-w2v", "bilstm-crf"):
            table = np.zeros((config.vocab_size, config.embedding_dim), dtype=np.float32)
        net = build_model(model_type, config, seed=0, embedding_table=table)
        model = cls(model_type, config, vocab, net)
        for p in model._state_parameters():
            entry = manifest["params"][p.name]
            data = np.frombuffer(base64.b64decode(entry["data"]), dtype="<f4")
            p.value[...] = data.reshape(entry["shape"]).astype(np.float32)
        return model
