"""Linear-chain CRF: log-partition (forward algorithm), NLL, Viterbi decoding."""

import numpy as np

from .errors import NumericError, ShapeError
from .nn.layers import Module, Parameter


def _logsumexp(a, axis=None):
    m = a.max(axis=axis, keepdims=True)
    out = np.log(np.exp(a - m).sum(axis=axis, keepdims=True)) + m
    return out.squeeze(axis) if axis is not None else float(out.item())


class CrfParams(Module):
    """Transition, start, and stop scores over the tag space."""

    def __init__(self, n_tags, dtype=np.float32, name="crf"):
        self.transitions = Parameter(np.zeros((n_tags, n_tags), dtype=dtype),
                                     f"{name}.transitions")
        self.start = Parameter(np.zeros(n_tags, dtype=dtype), f"{name}.start")
        self.stop = Parameter(np.zeros(n_tags, dtype=dtype), f"{name}.stop")
        self.n_tags = n_tags


def _check(emissions):
    emissions = np.asarray(emissions)
    if emissions.ndim != 2 or emissions.shape[0] < 1:
        raise ShapeError("emissions must be a non-empty T x L matrix")
    if not np.isfinite(emissions).all():
        raise NumericError("non-finite emissions")
    return emissions


def _forward_alphas(emissions, crf):
    t_len = emissions.shape[0]
    trans = crf.transitions.value
    alphas = np.empty_like(emissions, dtype=np.float64)
    alphas[0] = crf.start.value + emissions[0]
    for t in range(1, t_len):
        alphas[t] = _logsumexp(alphas[t - 1][:, None] + trans, axis=0) + emissions[t]
    return alphas


def crf_log_partition(emissions, crf):
    """log of the summed exponentiated scores over all tag paths."""
    emissions = _check(emissions)
    alphas = _forward_alphas(emissions, crf)
    return float(_logsumexp(alphas[-1] + crf.stop.value))


def path_score(emissions, tags, crf):
    emissions = _check(emissions)
    tags = list(tags)
    score = float(crf.start.value[tags[0]] + emissions[0, tags[0]])
    for t in range(1, len(tags)):
        score += float(crf.transitions.value[tags[t - 1], tags[t]] + emissions[t, tags[t]])
    return score + float(crf.stop.value[tags[-1]])


def crf_marginals(emissions, crf):
    """Per-position and per-transition posterior probabilities."""
    emissions = _check(emissions).astype(np.float64)
    t_len, n_tags = emissions.shape
    trans = crf.transitions.value.astype(np.float64)
    alphas = _forward_alphas(emissions, crf)
    betas = np.empty_like(alphas)
    betas[-1] = crf.stop.value
    for t in range(t_len - 2, -1, -1):
        betas[t] = _logsumexp(trans + emissions[t + 1] + betas[t + 1], axis=1)
    log_z = float(_logsumexp(alphas[-1] + crf.stop.value))
    unary = np.exp(alphas + betas - log_z)
    pairwise = np.zeros((n_tags, n_tags), dtype=np.float64)
    for t in range(1, t_len):
        joint = alphas[t - 1][:, None] + trans + emissions[t] + betas[t]
        pairwise += np.exp(joint - log_z)
    return log_z, unary, pairwise


def crf_nll(emissions, tags, crf, accumulate=True, scale=1.0):
    """Negative log-likelihood of the gold path; returns (loss, d_emissions).

    When accumulate is set, gradients w.r.t. the CRF parameters (times scale)
    are added to their .grad buffers; d_emissions is scaled the same way.
    """
    emissions = _check(emissions)
    tags = list(tags)
    if len(tags) != emissions.shape[0]:
        raise ShapeError("tag sequence length does not match emissions")
    log_z, unary, pairwise = crf_marginals(emissions, crf)
    loss = log_z - path_score(emissions, tags, crf)
    d_em = unary.copy()
    d_em[np.arange(len(tags)), tags] -= 1.0
    if accumulate:
        d_trans = pairwise
        for t in range(1, len(tags)):
            d_trans[tags[t - 1], tags[t]] -= 1.0
        crf.transitions.grad += (scale * d_trans).astype(crf.transitions.grad.dtype)
        d_start = unary[0].copy()
        d_start[tags[0]] -= 1.0
        crf.start.grad += (scale * d_start).astype(crf.start.grad.dtype)
        d_stop = unary[-1].copy()
        d_stop[tags[-1]] -= 1.0
        crf.stop.grad += (scale * d_stop).astype(crf.stop.grad.dtype)
    return float(loss), (scale * d_em).astype(emissions.dtype)


def crf_decode(emissions, crf):
    """Viterbi best path; argmax ties resolve to the lower tag index."""
    emissions = _check(emissions)
    t_len = emissions.shape[0]
    trans = crf.transitions.value
    delta = crf.start.value + emissions[0]
    backpointers = []
    for t in range(1, t_len):
        scores = delta[:, None] + trans
        backpointers.append(scores.argmax(axis=0))
        delta = scores.max(axis=0) + emissions[t]
    delta = delta + crf.stop.value
    best = int(delta.argmax())
    path = [best]
    for bp in reversed(backpointers):
        best = int(bp[best])
        path.append(best)
    return path[::-1]
