"""Network layers with explicit forward/backward passes.

Tensors are NHWC (batch, height, width, channels), float32 by default and
float64 in verification mode.  Convolution uses im2col patches fed to BLAS
matmuls, chunked over the batch so peak memory stays bounded; chunk
boundaries depend only on shapes, keeping accumulation order (and therefore
results) independent of anything but the input.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import LabelOutOfRange, ShapeMismatch

# Patch-matrix budget per im2col chunk (elements, not bytes).
_CHUNK_ELEMS = 1 << 24


class Param:
    """One trainable array with its gradient and Adam moment slots."""

    __slots__ = ("name", "value", "grad", "m", "v")

    def __init__(self, name, value):
        self.name = name
        self.value = value
        self.grad = np.zeros_like(value)
        self.m = np.zeros_like(value)
        self.v = np.zeros_like(value)


class Layer:
    """Base layer: params/state empty unless overridden."""

    def params(self):
        return []

    def state_arrays(self):
        """Non-trainable persistent state (e.g. batch-norm running stats)."""
        return []

    def forward(self, x, train):
        raise NotImplementedError

    def backward(self, dy):
        raise NotImplementedError


def he_uniform(rng, shape, fan_in, dtype):
    bound = np.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


def _batch_chunk(per_image_elems, batch):
    step = max(1, _CHUNK_ELEMS // max(1, per_image_elems))
    return min(step, batch)


class Conv2D(Layer):
    """k x k convolution, stride 1, zero 'same' padding, He-uniform init."""

    def __init__(self, cin, cout, ksize, rng, dtype):
        self.cin, self.cout, self.ksize = cin, cout, ksize
        self.pad = ksize // 2
        self.w = Param(
            "w", he_uniform(rng, (ksize, ksize, cin, cout),
                            ksize * ksize * cin, dtype)
        )
        self.b = Param("b", np.zeros(cout, dtype=dtype))
        self._x = None

    def params(self):
        return [self.w, self.b]

    def _correlate(self, x, kernel):
        """Same-size correlation of NHWC x with (k, k, ci, co) kernel."""
        k = kernel.shape[0]
        p = k // 2
        b, h, w, ci = x.shape
        co = kernel.shape[3]
        xp = np.pad(x, ((0, 0), (p, p), (p, p), (0, 0)))
        win = sliding_window_view(xp, (k, k), axis=(1, 2))
        kmat = kernel.reshape(-1, co)
        out = np.empty((b, h, w, co), dtype=x.dtype)
        step = _batch_chunk(h * w * k * k * ci, b)
        for b0 in range(0, b, step):
            b1 = min(b0 + step, b)
            cols = np.ascontiguousarray(
                win[b0:b1].transpose(0, 1, 2, 4, 5, 3)
            ).reshape(-1, k * k * ci)
            out[b0:b1] = (cols @ kmat).reshape(b1 - b0, h, w, co)
        return out

    def forward(self, x, train):
        if x.shape[3] != self.cin:
            raise ShapeMismatch(
                f"conv expects {self.cin} input channels, got {x.shape[3]}"
            )
        if train:
            self._x = x
        return self._correlate(x, self.w.value) + self.b.value

    def backward(self, dy):
        x = self._x
        k, p = self.ksize, self.pad
        b, h, w, ci = x.shape
        co = self.cout

        self.b.grad[...] = dy.sum(axis=(0, 1, 2))

        # dW: correlate stored input with the upstream gradient.
        xp = np.pad(x, ((0, 0), (p, p), (p, p), (0, 0)))
        win = sliding_window_view(xp, (k, k), axis=(1, 2))
        dw = np.zeros((k * k * ci, co), dtype=x.dtype)
        step = _batch_chunk(h * w * k * k * ci, b)
        for b0 in range(0, b, step):
            b1 = min(b0 + step, b)
            cols = np.ascontiguousarray(
                win[b0:b1].transpose(0, 1, 2, 4, 5, 3)
            ).reshape(-1, k * k * ci)
            dw += cols.T @ dy[b0:b1].reshape(-1, co)
        self.w.grad[...] = dw.reshape(k, k, ci, co)

        # dx: correlate dy with the spatially flipped, transposed kernel.
        wf = self.w.value[::-1, ::-1].transpose(0, 1, 3, 2)
        return self._correlate(dy, np.ascontiguousarray(wf))

    def out_shape(self, in_shape):
        h, w, _ = in_shape
        return (h, w, self.cout)


class BatchNorm2D(Layer):
    """Per-channel batch normalization over (batch, height, width)."""

    def __init__(self, channels, dtype, momentum=0.9, eps=1e-5):
        self.channels = channels
        self.momentum = momentum
        self.eps = eps
        self.gamma = Param("gamma", np.ones(channels, dtype=dtype))
        self.beta = Param("beta", np.zeros(channels, dtype=dtype))
        self.running_mean = np.zeros(channels, dtype=dtype)
        self.running_var = np.ones(channels, dtype=dtype)
        self._cache = None

    def params(self):
        return [self.gamma, self.beta]

    def state_arrays(self):
        return [self.running_mean, self.running_var]

    def forward(self, x, train):
        if x.shape[3] != self.channels:
            raise ShapeMismatch(
                f"batchnorm expects {self.channels} channels, got {x.shape[3]}"
            )
        if train:
            mean = x.mean(axis=(0, 1, 2))
            var = x.var(axis=(0, 1, 2))
            inv_std = 1.0 / np.sqrt(var + self.eps)
            xhat = (x - mean) * inv_std
            m = self.momentum
            self.running_mean[...] = m * self.running_mean + (1 - m) * mean
            self.running_var[...] = m * self.running_var + (1 - m) * var
            self._cache = (xhat, inv_std)
        else:
            inv_std = 1.0 / np.sqrt(self.running_var + self.eps)
            xhat = (x - self.running_mean) * inv_std
        return self.gamma.value * xhat + self.beta.value

    def backward(self, dy):
        xhat, inv_std = self._cache
        n = dy.shape[0] * dy.shape[1] * dy.shape[2]
        self.gamma.grad[...] = (dy * xhat).sum(axis=(0, 1, 2))
        self.beta.grad[...] = dy.sum(axis=(0, 1, 2))
        coef = self.gamma.value * inv_std / n
        return coef * (
            n * dy
            - dy.sum(axis=(0, 1, 2))
            - xhat * (dy * xhat).sum(axis=(0, 1, 2))
        )

    def out_shape(self, in_shape):
        return in_shape


class ReLU(Layer):
    def __init__(self):
        self._mask = None

    def forward(self, x, train):
        if train:
            self._mask = x > 0
            return np.where(self._mask, x, x.dtype.type(0))
        return np.maximum(x, 0)

    def backward(self, dy):
        return np.where(self._mask, dy, dy.dtype.type(0))

    def out_shape(self, in_shape):
        return in_shape


class MaxPool2(Layer):
    """2x2 max pooling, stride 2; ties resolve to the first window slot."""

    def __init__(self):
        self._idx = None
        self._in_shape = None

    def forward(self, x, train):
        b, h, w, c = x.shape
        if h % 2 or w % 2:
            raise ShapeMismatch(f"pool needs even dims, got {h}x{w}")
        win = (
            x.reshape(b, h // 2, 2, w // 2, 2, c)
            .transpose(0, 1, 3, 2, 4, 5)
            .reshape(b, h // 2, w // 2, 4, c)
        )
        idx = win.argmax(axis=3)
        out = np.take_along_axis(win, idx[:, :, :, None, :], axis=3)
        if train:
            self._idx = idx
            self._in_shape = x.shape
        return out[:, :, :, 0, :]

    def backward(self, dy):
        b, h, w, c = self._in_shape
        dwin = np.zeros((b, h // 2, w // 2, 4, c), dtype=dy.dtype)
        np.put_along_axis(
            dwin, self._idx[:, :, :, None, :], dy[:, :, :, None, :], axis=3
        )
        return (
            dwin.reshape(b, h // 2, w // 2, 2, 2, c)
            .transpose(0, 1, 3, 2, 4, 5)
            .reshape(b, h, w, c)
        )

    def out_shape(self, in_shape):
        h, w, c = in_shape
        if h % 2 or w % 2:
            raise ShapeMismatch(f"pool needs even dims, got {h}x{w}")
        return (h // 2, w // 2, c)


class GlobalAvgPool(Layer):
    """Mean over the spatial extent: (B, H, W, C) -> (B, C)."""

    def __init__(self):
        self._in_shape = None

    def forward(self, x, train):
        if train:
            self._in_shape = x.shape
        return x.mean(axis=(1, 2))

    def backward(self, dy):
        b, h, w, c = self._in_shape
        scale = dy.dtype.type(1.0 / (h * w))
        return np.broadcast_to(
            dy[:, None, None, :] * scale, (b, h, w, c)
        ).copy()

    def out_shape(self, in_shape):
        return (in_shape[2],)


class Dense(Layer):
    """Fully connected layer; flattens any trailing input dimensions."""

    def __init__(self, fan_in, fan_out, rng, dtype):
        self.fan_in, self.fan_out = fan_in, fan_out
        self.w = Param("w", he_uniform(rng, (fan_in, fan_out), fan_in, dtype))
        self.b = Param("b", np.zeros(fan_out, dtype=dtype))
        self._x2 = None
        self._in_shape = None

    def params(self):
        return [self.w, self.b]

    def forward(self, x, train):
        x2 = x.reshape(x.shape[0], -1)
        if x2.shape[1] != self.fan_in:
            raise ShapeMismatch(
                f"dense expects {self.fan_in} features, got {x2.shape[1]}"
            )
        if train:
            self._x2 = x2
            self._in_shape = x.shape
        return x2 @ self.w.value + self.b.value

    def backward(self, dy):
        self.w.grad[...] = self._x2.T @ dy
        self.b.grad[...] = dy.sum(axis=0)
        return (dy @ self.w.value.T).reshape(self._in_shape)

    def out_shape(self, in_shape):
        return (self.fan_out,)


def softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def softmax_xent(logits, labels):
    """Mean softmax cross-entropy; returns (loss, dlogits).

    ``dlogits`` is (softmax - one_hot) / batch, so downstream backward
    passes see the gradient of the mean loss.
    """
    labels = np.asarray(labels)
    n, c = logits.shape
    if labels.shape != (n,):
        raise ShapeMismatch(f"labels shape {labels.shape} != ({n},)")
    if labels.size and (labels.min() < 0 or labels.max() >= c):
        raise LabelOutOfRange(
            f"labels must be in [0, {c}), got range "
            f"[{labels.min()}, {labels.max()}]"
        )
    p = softmax(logits)
    eps = np.finfo(logits.dtype).tiny
    loss = float(-np.log(p[np.arange(n), labels] + eps).mean())
    d = p.copy()
    d[np.arange(n), labels] -= 1
    return loss, d / n
