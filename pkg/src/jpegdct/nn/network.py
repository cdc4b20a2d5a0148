"""Network assembly from architecture tokens, plus checkpoint I/O.

The default stack is two 3x3x32 conv/BN/ReLU groups, a 2x pool, two
3x3x64 groups, another pool, one 3x3x128 group, global average pooling,
and a dense classifier.  Any token list with the same vocabulary can be
substituted via configuration.
"""

import json
import re
import struct

import numpy as np

from .errors import BadArchConfig, ShapeMismatch
from .layers import (
    BatchNorm2D,
    Conv2D,
    Dense,
    GlobalAvgPool,
    MaxPool2,
    ReLU,
)

DEFAULT_ARCH = (
    "conv3x32", "bn", "relu",
    "conv3x32", "bn", "relu",
    "pool2",
    "conv3x64", "bn", "relu",
    "conv3x64", "bn", "relu",
    "pool2",
    "conv3x128", "bn", "relu",
    "gap",
    "dense",
)

_CONV_RE = re.compile(r"^conv(\d+)x(\d+)$")
_POOL_RE = re.compile(r"^pool(\d+)$")
_DENSE_RE = re.compile(r"^dense(?::(\d+))?$")

_CHECKPOINT_MAGIC = b"JDCTNET1"


class Network:
    """Ordered layer stack with a shared Adam step counter."""

    def __init__(self, layers, input_shape, num_classes, arch, seed, dtype):
        self.layers = layers
        self.input_shape = tuple(input_shape)
        self.num_classes = num_classes
        self.arch = tuple(arch)
        self.seed = seed
        self.dtype = np.dtype(dtype)
        self.adam_t = 0

    def params(self):
        out = []
        for layer in self.layers:
            out.extend(layer.params())
        return out

    def state_arrays(self):
        out = []
        for layer in self.layers:
            out.extend(layer.state_arrays())
        return out

    def forward(self, x, train=False):
        x = np.asarray(x)
        if x.ndim != 4 or x.shape[1:] != self.input_shape:
            raise ShapeMismatch(
                f"batch shape {x.shape} does not match input "
                f"{('B',) + self.input_shape}"
            )
        x = x.astype(self.dtype, copy=False)
        for layer in self.layers:
            x = layer.forward(x, train)
        return x

    def backward(self, dlogits):
        d = np.asarray(dlogits, dtype=self.dtype)
        for layer in reversed(self.layers):
            d = layer.backward(d)
        return d


def parse_arch(tokens):
    """Validate architecture tokens; raises BadArchConfig."""
    tokens = tuple(tokens)
    if not tokens:
        raise BadArchConfig("empty architecture")
    if not _DENSE_RE.match(tokens[-1]):
        raise BadArchConfig("architecture must end with a dense classifier")
    for tok in tokens:
        if tok in ("bn", "relu", "gap"):
            continue
        if _CONV_RE.match(tok) or _POOL_RE.match(tok) or _DENSE_RE.match(tok):
            continue
        raise BadArchConfig(f"unknown layer token {tok!r}")
    return tokens


def build_dct_cnn(input_shape, num_classes, arch=None, seed=0,
                  dtype=np.float32) -> Network:
    """Instantiate the coefficient-tensor classifier.

    ``input_shape`` is (height, width, channels).  Identical seeds produce
    bitwise-identical initial parameters.
    """
    if num_classes < 2:
        raise BadArchConfig(f"num_classes must be >= 2, got {num_classes}")
    if len(input_shape) != 3:
        raise BadArchConfig(f"input_shape must be (H, W, C): {input_shape}")
    tokens = parse_arch(DEFAULT_ARCH if arch is None else arch)
    dtype = np.dtype(dtype)
    rng = np.random.Generator(np.random.PCG64(seed))

    layers = []
    shape = tuple(input_shape)
    for tok in tokens:
        m = _CONV_RE.match(tok)
        if m:
            if len(shape) != 3:
                raise BadArchConfig(f"{tok!r} after spatial collapse")
            k, cout = int(m.group(1)), int(m.group(2))
            if k % 2 == 0:
                raise BadArchConfig(f"conv kernel must be odd, got {k}")
            layer = Conv2D(shape[2], cout, k, rng, dtype)
            layers.append(layer)
            shape = layer.out_shape(shape)
            continue
        m = _POOL_RE.match(tok)
        if m:
            if int(m.group(1)) != 2:
                raise BadArchConfig("only pool2 is supported")
            if len(shape) != 3:
                raise BadArchConfig(f"{tok!r} after spatial collapse")
            layer = MaxPool2()
            layers.append(layer)
            shape = layer.out_shape(shape)
            continue
        m = _DENSE_RE.match(tok)
        if m:
            width = int(m.group(1)) if m.group(1) else num_classes
            fan_in = int(np.prod(shape))
            layer = Dense(fan_in, width, rng, dtype)
            layers.append(layer)
            shape = layer.out_shape(shape)
            continue
        if tok == "bn":
            if len(shape) != 3:
                raise BadArchConfig("bn after spatial collapse")
            layers.append(BatchNorm2D(shape[2], dtype))
            continue
        if tok == "relu":
            layers.append(ReLU())
            continue
        if tok == "gap":
            if len(shape) != 3:
                raise BadArchConfig("gap after spatial collapse")
            layer = GlobalAvgPool()
            layers.append(layer)
            shape = layer.out_shape(shape)
            continue
    if shape != (num_classes,):
        raise BadArchConfig(
            f"classifier emits {shape}, expected ({num_classes},)"
        )
    return Network(layers, input_shape, num_classes, tokens, seed, dtype)


def save_checkpoint(net: Network, path):
    """Versioned binary checkpoint: magic, JSON header, little-endian f32."""
    header = json.dumps({
        "arch": list(net.arch),
        "input_shape": list(net.input_shape),
        "num_classes": net.num_classes,
        "seed": net.seed,
        "dtype": net.dtype.name,
        "adam_t": net.adam_t,
    }).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_CHECKPOINT_MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        for p in net.params():
            fh.write(np.ascontiguousarray(p.value, dtype="<f4").tobytes())
        for s in net.state_arrays():
            fh.write(np.ascontiguousarray(s, dtype="<f4").tobytes())


def load_checkpoint(path) -> Network:
    with open(path, "rb") as fh:
        magic = fh.read(len(_CHECKPOINT_MAGIC))
        if magic != _CHECKPOINT_MAGIC:
            raise ValueError(f"not a checkpoint file: {path}")
        (hlen,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        net = build_dct_cnn(
            tuple(header["input_shape"]),
            header["num_classes"],
            arch=tuple(header["arch"]),
            seed=header["seed"],
            dtype=np.dtype(header["dtype"]),
        )
        net.adam_t = header["adam_t"]
        for p in net.params():
            raw = fh.read(p.value.size * 4)
            p.value[...] = np.frombuffer(raw, dtype="<f4").reshape(
                p.value.shape
            ).astype(net.dtype)
        for s in net.state_arrays():
            raw = fh.read(s.size * 4)
            s[...] = np.frombuffer(raw, dtype="<f4").reshape(s.shape).astype(
                net.dtype
            )
    return net
