"""Finite-difference verification of every analytic gradient.

All checks run in float64 with central differences; float32 would drown the
comparison in rounding noise.
"""

import numpy as np

from ..crf import CrfParams, crf_nll
from .layers import (
    BiLSTM,
    Conv1d,
    Dense,
    LSTM,
    MaxPool1d,
    Parameter,
    SoftmaxCrossEntropy,
    TokenConv1d,
)

EPS = 1e-5
FLOOR = 1e-8


def relative_error(a, b):
    return abs(a - b) / max(abs(a), abs(b), FLOOR)


def gradient_check(run, params, eps=EPS):
    """Compare analytic gradients against central differences.

    run(compute_grads) must return the scalar loss; when compute_grads is
    true it must also zero and repopulate every parameter's .grad.
    Returns the max relative error over all parameter coordinates.
    """
    run(True)
    analytic = [p.grad.copy() for p in params]
    max_err = 0.0
    for p, grad in zip(params, analytic):
        flat = p.value.reshape(-1)
        flat_grad = grad.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            loss_plus = run(False)
            flat[i] = orig - eps
            loss_minus = run(False)
            flat[i] = orig
            numeric = (loss_plus - loss_minus) / (2 * eps)
            max_err = max(max_err, relative_error(float(flat_grad[i]), numeric))
    return max_err


def _projection_case(layer, x_value, rng, out_shape, include_input=True):
    """Scalar loss = sum(output * R) for a fixed random projection R."""
    r = rng.normal(size=out_shape)
    x = Parameter(x_value, "x")
    params = list(layer.parameters())
    if include_input:
        params.append(x)

    def run(compute):
        if compute:
            for p in params:
                p.zero_grad()
        out = layer.forward(x.value)
        loss = float((out * r).sum())
        if compute:
            dx = layer.backward(r)
            if include_input and dx is not None:
                x.grad += dx
        return loss

    return run, params


def check_dense(rng):
    d_in = int(rng.integers(2, 6))
    d_out = int(rng.integers(2, 6))
    layer = Dense(d_in, d_out, rng, dtype=np.float64)
    run, params = _projection_case(layer, rng.normal(size=d_in), rng, (d_out,))
    return gradient_check(run, params)


def check_conv1d(rng):
    t = int(rng.integers(4, 9))
    k = int(rng.integers(2, min(4, t) + 1))
    c_in = int(rng.integers(1, 4))
    c_out = int(rng.integers(1, 4))
    layer = Conv1d(k, c_in, c_out, rng, dtype=np.float64)
    run, params = _projection_case(
        layer, rng.normal(size=(t, c_in)), rng, (t - k + 1, c_out)
    )
    return gradient_check(run, params)


def check_token_conv1d(rng):
    t = int(rng.integers(3, 8))
    k = int(rng.integers(2, min(3, t) + 1))
    vocab = int(rng.integers(4, 9))
    c_out = int(rng.integers(1, 4))
    layer = TokenConv1d(k, vocab, c_out, rng, dtype=np.float64)
    ids = rng.integers(0, vocab, size=t)
    r = rng.normal(size=(t - k + 1, c_out))
    params = layer.parameters()

    def run(compute):
        if compute:
            for p in params:
                p.zero_grad()
        out = layer.forward(ids)
        loss = float((out * r).sum())
        if compute:
            layer.backward(r)
        return loss

    return gradient_check(run, params)


def check_maxpool(rng):
    t = int(rng.integers(4, 10))
    c = int(rng.integers(1, 4))
    width = int(rng.integers(2, min(4, t) + 1))
    layer = MaxPool1d(width)
    # well-separated values so the argmax never flips under +/- eps
    x_value = rng.permutation(t * c).astype(np.float64).reshape(t, c)
    run, params = _projection_case(layer, x_value, rng, (t // width, c))
    return gradient_check(run, params)


def check_softmax_xent(rng):
    n = int(rng.integers(2, 8))
    gold = int(rng.integers(0, n))
    logits = Parameter(rng.normal(size=n), "logits")
    loss_layer = SoftmaxCrossEntropy()

    def run(compute):
        if compute:
            logits.zero_grad()
        loss = loss_layer.forward(logits.value, gold)
        if compute:
            logits.grad += loss_layer.backward()
        return loss

    return gradient_check(run, [logits])


def check_lstm(rng):
    t = int(rng.integers(1, 5))
    d = int(rng.integers(2, 5))
    h = int(rng.integers(2, 5))
    layer = LSTM(d, h, rng, dtype=np.float64)
    run, params = _projection_case(layer, rng.normal(size=(t, d)), rng, (t, h))
    return gradient_check(run, params)


def check_bilstm(rng):
    t = int(rng.integers(1, 5))
    d = int(rng.integers(2, 5))
    h = int(rng.integers(2, 4))
    layer = BiLSTM(d, h, rng, dtype=np.float64)
    run, params = _projection_case(layer, rng.normal(size=(t, d)), rng, (t, 2 * h))
    return gradient_check(run, params)


def check_crf_nll(rng):
    t = int(rng.integers(1, 6))
    n_tags = int(rng.integers(2, 6))
    crf = CrfParams(n_tags, dtype=np.float64)
    crf.transitions.value[...] = rng.normal(size=(n_tags, n_tags))
    crf.start.value[...] = rng.normal(size=n_tags)
    crf.stop.value[...] = rng.normal(size=n_tags)
    emissions = Parameter(rng.normal(size=(t, n_tags)), "emissions")
    tags = [int(rng.integers(0, n_tags)) for _ in range(t)]
    params = crf.parameters() + [emissions]

    def run(compute):
        if compute:
            for p in params:
                p.zero_grad()
        loss, d_em = crf_nll(emissions.value, tags, crf, accumulate=compute)
        if compute:
            emissions.grad += d_em
        return loss

    return gradient_check(run, params)


CHECKS = {
    "dense": check_dense,
    "conv1d": check_conv1d,
    "token_conv1d": check_token_conv1d,
    "maxpool": check_maxpool,
    "softmax_xent": check_softmax_xent,
    "lstm": check_lstm,
    "bilstm": check_bilstm,
    "crf_nll": check_crf_nll,
}


def run_suite(trials=10, seed=0, ops=None):
    """Run every gradient check; returns {op: max relative error}."""
    results = {}
    for offset, (name, check) in enumerate(CHECKS.items()):
        if ops is not None and name not in ops:
            continue
        rng = np.random.default_rng(seed + offset)
        results[name] = max(check(rng) for _ in range(trials))
    return results
