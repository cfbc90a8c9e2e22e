"""Hand-written neural layers with analytic forward/backward passes.

All layers operate on single samples (one sentence or one document); batching
is done by accumulating gradients across samples before an optimizer step.
Training uses float32, gradient verification float64.
"""

import numpy as np

from ..errors import NumericError, ShapeError


def check_finite(array, name):
    if not np.isfinite(array).all():
        raise NumericError(f"non-finite values in {name}")


class Parameter:
    def __init__(self, value, name):
        self.value = np.asarray(value)
        self.grad = np.zeros_like(self.value)
        self.name = name

    def zero_grad(self):
        self.grad[...] = 0


def glorot_uniform(rng, shape, fan_in, fan_out, dtype):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


class Module:
    def parameters(self):
        out = []
        for value in vars(self).values():
            if isinstance(value, Parameter):
                out.append(value)
            elif isinstance(value, Module):
                out.extend(value.parameters())
            elif isinstance(value, (list, tuple)):
                for item in value:
                    if isinstance(item, Module):
                        out.extend(item.parameters())
        return out

    def zero_grads(self):
        for p in self.parameters():
            p.zero_grad()


class Dense(Module):
    def __init__(self, d_in, d_out, rng, dtype=np.float32, name="dense"):
        self.W = Parameter(glorot_uniform(rng, (d_in, d_out), d_in, d_out, dtype), f"{name}.W")
        self.b = Parameter(np.zeros(d_out, dtype=dtype), f"{name}.b")

    def forward(self, x):
        self._x = x
        return x @ self.W.value + self.b.value

    def backward(self, dout):
        if self._x.ndim == 1:
            self.W.grad += np.outer(self._x, dout)
            self.b.grad += dout
        else:
            self.W.grad += self._x.T @ dout
            self.b.grad += dout.sum(axis=0)
        return dout @ self.W.value.T


class ReLU(Module):
    def forward(self, x):
        self._mask = x > 0
        return np.where(self._mask, x, 0)

    def backward(self, dout):
        return dout * self._mask


def relu(x):
    return np.maximum(x, 0)


class Conv1d(Module):
    """Valid (no padding) 1-D convolution over a T x Cin sequence."""

    def __init__(self, width, c_in, c_out, rng, dtype=np.float32, name="conv"):
        fan_in = width * c_in
        self.kernel = Parameter(
            glorot_uniform(rng, (width, c_in, c_out), fan_in, c_out, dtype), f"{name}.kernel"
        )
        self.bias = Parameter(np.zeros(c_out, dtype=dtype), f"{name}.bias")
        self.width = width

    def forward(self, x):
        t, c_in = x.shape
        k = self.width
        if t < k:
            raise ShapeError(f"sequence length {t} shorter than kernel width {k}")
        t_out = t - k + 1
        cols = np.stack([x[i : i + t_out] for i in range(k)], axis=1)  # (t_out, k, c_in)
        self._cols = cols.reshape(t_out, k * c_in)
        self._t = t
        w = self.kernel.value.reshape(k * c_in, -1)
        return self._cols @ w + self.bias.value

    def backward(self, dout):
        k = self.width
        c_out = dout.shape[1]
        w = self.kernel.value.reshape(-1, c_out)
        self.kernel.grad += (self._cols.T @ dout).reshape(self.kernel.value.shape)
        self.bias.grad += dout.sum(axis=0)
        dcols = (dout @ w.T).reshape(dout.shape[0], k, -1)
        dx = np.zeros((self._t, dcols.shape[2]), dtype=dout.dtype)
        t_out = dout.shape[0]
        for i in range(k):
            dx[i : i + t_out] += dcols[:, i, :]
        return dx


class TokenConv1d(Module):
    """First convolution applied directly to token indices.

    Equivalent to a valid convolution over one-hot token vectors: the kernel
    rows are indexed by token id instead of being multiplied by a dense
    one-hot matrix.
    """

    def __init__(self, width, vocab_size, c_out, rng, dtype=np.float32, name="tokconv"):
        self.kernel = Parameter(
            glorot_uniform(rng, (width, vocab_size, c_out), width, c_out, dtype),
            f"{name}.kernel",
        )
        self.bias = Parameter(np.zeros(c_out, dtype=dtype), f"{name}.bias")
        self.width = width

    def forward(self, token_ids):
        t = len(token_ids)
        k = self.width
        if t < k:
            raise ShapeError(f"sequence length {t} shorter than kernel width {k}")
        self._ids = np.asarray(token_ids)
        t_out = t - k + 1
        out = np.tile(self.bias.value, (t_out, 1))
        for i in range(k):
            out += self.kernel.value[i][self._ids[i : i + t_out]]
        return out

    def backward(self, dout):
        t_out = dout.shape[0]
        for i in range(self.width):
            np.add.at(self.kernel.grad[i], self._ids[i : i + t_out], dout)
        self.bias.grad += dout.sum(axis=0)
        return None  # token indices carry no gradient


class MaxPool1d(Module):
    """Non-overlapping window max per channel; gradient to the first maximum."""

    def __init__(self, width):
        self.width = width

    def forward(self, x):
        t, c = x.shape
        w = self.width
        if t < w:
            raise ShapeError(f"sequence length {t} shorter than pool width {w}")
        t_out = t // w
        windows = x[: t_out * w].reshape(t_out, w, c)
        self._argmax = windows.argmax(axis=1)  # first max on ties
        self._t = t
        self._c = c
        return windows.max(axis=1)

    def backward(self, dout):
        w = self.width
        t_out, c = dout.shape
        dx = np.zeros((self._t, c), dtype=dout.dtype)
        rows = (np.arange(t_out)[:, None] * w + self._argmax)
        np.add.at(dx, (rows.ravel(), np.tile(np.arange(c), t_out)), dout.ravel())
        return dx


class MaxOverTime(Module):
    """Global max pooling over the time axis (per channel)."""

    def forward(self, x):
        self._argmax = x.argmax(axis=0)
        self._t = x.shape[0]
        return x.max(axis=0)

    def backward(self, dout):
        dx = np.zeros((self._t, dout.shape[0]), dtype=dout.dtype)
        dx[self._argmax, np.arange(dout.shape[0])] = dout
        return dx


class Embedding(Module):
    def __init__(self, vocab_size, dim, rng=None, dtype=np.float32, trainable=True,
                 table=None, name="embed"):
        if table is not None:
            value = np.asarray(table, dtype=dtype)
        else:
            value = glorot_uniform(rng, (vocab_size, dim), vocab_size, dim, dtype)
        self.weight = Parameter(value, f"{name}.weight")
        self.trainable = trainable

    def parameters(self):
        return [self.weight] if self.trainable else []

    def forward(self, token_ids):
        self._ids = np.asarray(token_ids)
        return self.weight.value[self._ids]

    def backward(self, dout):
        if self.trainable:
            np.add.at(self.weight.grad, self._ids, dout)
        return None


def softmax(z):
    z = np.asarray(z)
    check_finite(z, "softmax input")
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    p = e / e.sum(axis=-1, keepdims=True)
    # keep outputs strictly inside (0, 1) even when exp underflows
    p = np.maximum(p, 1e-12)
    return p / p.sum(axis=-1, keepdims=True)


def cross_entropy(p, gold):
    p = np.asarray(p)
    if not 0 <= gold < p.shape[-1]:
        raise IndexError(f"gold index {gold} out of range for {p.shape[-1]} classes")
    return float(-np.log(max(float(p[gold]), 1e-12)))


class SoftmaxCrossEntropy(Module):
    """Fused softmax + cross-entropy over logits; backward yields p - onehot."""

    def forward(self, logits, gold):
        self._p = softmax(logits)
        self._gold = gold
        return cross_entropy(self._p, gold)

    def backward(self, dloss=1.0):
        d = self._p.copy()
        d[self._gold] -= 1.0
        return d * dloss


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


class LSTM(Module):
    """Single-direction LSTM over a T x D input, zero initial state."""

    def __init__(self, d_in, hidden, rng, dtype=np.float32, name="lstm"):
        h = hidden
        self.Wx = Parameter(glorot_uniform(rng, (d_in, 4 * h), d_in, h, dtype), f"{name}.Wx")
        self.Wh = Parameter(glorot_uniform(rng, (h, 4 * h), h, h, dtype), f"{name}.Wh")
        self.b = Parameter(np.zeros(4 * h, dtype=dtype), f"{name}.b")
        self.hidden = h

    def forward(self, xs):
        if len(xs) == 0:
            raise ShapeError("empty input sequence")
        h = self.hidden
        dtype = self.Wx.value.dtype
        h_prev = np.zeros(h, dtype=dtype)
        c_prev = np.zeros(h, dtype=dtype)
        self._cache = []
        outputs = np.empty((len(xs), h), dtype=dtype)
        for t, x in enumerate(xs):
            a = x @ self.Wx.value + h_prev @ self.Wh.value + self.b.value
            i = _sigmoid(a[:h])
            f = _sigmoid(a[h : 2 * h])
            o = _sigmoid(a[2 * h : 3 * h])
            g = np.tanh(a[3 * h :])
            c = f * c_prev + i * g
            tanh_c = np.tanh(c)
            h_t = o * tanh_c
            self._cache.append((x, h_prev, c_prev, i, f, o, g, tanh_c))
            outputs[t] = h_t
            h_prev, c_prev = h_t, c
        return outputs

    def backward(self, dout):
        h = self.hidden
        dtype = self.Wx.value.dtype
        dh_next = np.zeros(h, dtype=dtype)
        dc_next = np.zeros(h, dtype=dtype)
        dxs = np.empty((len(self._cache), self.Wx.value.shape[0]), dtype=dtype)
        for t in range(len(self._cache) - 1, -1, -1):
            x, h_prev, c_prev, i, f, o, g, tanh_c = self._cache[t]
            dh = dout[t] + dh_next
            do = dh * tanh_c
            dc = dh * o * (1 - tanh_c * tanh_c) + dc_next
            di = dc * g
            df = dc * c_prev
            dg = dc * i
            da = np.concatenate(
                [di * i * (1 - i), df * f * (1 - f), do * o * (1 - o), dg * (1 - g * g)]
            )
            self.Wx.grad += np.outer(x, da)
            self.Wh.grad += np.outer(h_prev, da)
            self.b.grad += da
            dxs[t] = da @ self.Wx.value.T
            dh_next = da @ self.Wh.value.T
            dc_next = dc * f
        return dxs


class BiLSTM(Module):
    """Forward and reversed LSTM passes, per-step outputs concatenated (2H)."""

    def __init__(self, d_in, hidden, rng, dtype=np.float32, name="bilstm"):
        self.fw = LSTM(d_in, hidden, rng, dtype, name=f"{name}.fw")
        self.bw = LSTM(d_in, hidden, rng, dtype, name=f"{name}.bw")

    def forward(self, xs):
        out_fw = self.fw.forward(xs)
        out_bw = self.bw.forward(xs[::-1])[::-1]
        return np.concatenate([out_fw, out_bw], axis=1)

    def backward(self, dout):
        h = self.fw.hidden
        dx_fw = self.fw.backward(dout[:, :h])
        dx_bw = self.bw.backward(dout[::-1, h:])[::-1]
        return dx_fw + dx_bw
