"""Loader for word2vec text-format embedding files."""

import numpy as np

from .corpus import PAD_INDEX
from .errors import DimError, ParseError


def load_embeddings(path, vocab, dtype=np.float32):
    """Embedding table aligned to vocabulary indices.

    The file may begin with a "count dim" header line. Tokens absent from the
    file get zero rows, as does the padding index.
    """
    dim = None
    vectors = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if line_no == 1 and len(parts) == 2:
                try:
                    int(parts[0]), int(parts[1])
                    continue  # header line
                except ValueError:
                    pass
            token, values = parts[0], parts[1:]
            if not values:
                raise ParseError(f"no vector values for token {token!r}", line=line_no)
            try:
                vector = np.array([float(v) for v in values], dtype=dtype)
            except ValueError:
                raise ParseError(f"non-numeric vector value for token {token!r}",
                                 line=line_no) from None
            if dim is None:
                dim = len(vector)
            elif len(vector) != dim:
                raise DimError(
                    f"line {line_no}: expected {dim} dimensions, got {len(vector)}"
                )
            if token in vocab:
                vectors[token] = vector
    if dim is None:
        raise ParseError("embedding file contains no vectors")
    table = np.zeros((len(vocab), dim), dtype=dtype)
    for token, vector in vectors.items():
        table[vocab.index_of(token)] = vector
    table[PAD_INDEX] = 0.0
    return table
