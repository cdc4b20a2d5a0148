"""Training loop: Adam, stepped learning-rate schedule, metrics.

Determinism contract: a fixed (seed, data, thread count) triple produces
bitwise-identical parameters and metrics.  Batch order comes from a
generator seeded by (seed, epoch); all arithmetic is plain numpy.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyDataset
from .layers import softmax_xent
from .network import Network


@dataclass
class Hyperparams:
    base_lr: float = 0.01
    lr_decay: float = 0.9
    lr_decay_every: int = 10
    batch_size: int = 128
    epochs: int = 100
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.base_lr <= 0:
            raise ValueError("base_lr must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not 0 < self.lr_decay < 1:
            raise ValueError("lr_decay must be in (0, 1)")


@dataclass
class EpochMetrics:
    epoch: int
    mean_loss: float
    train_acc: float
    eval_acc: float  # nan when no eval set was supplied
    seconds: float  # wall time of the training section
    eval_seconds: float  # wall time of the pure-forward evaluation pass
    steps: int


class ArrayDataset:
    """In-memory tensors + labels implementing the batch protocol."""

    def __init__(self, x, y):
        self.x = np.asarray(x)
        self.y = np.asarray(y, dtype=np.int64)
        if self.x.shape[0] != self.y.shape[0]:
            raise ValueError("tensor/label count mismatch")

    def __len__(self):
        return self.x.shape[0]

    def batches(self, batch_size, rng=None):
        n = len(self)
        order = rng.permutation(n) if rng is not None else np.arange(n)
        for i in range(0, n, batch_size):
            sel = order[i : i + batch_size]
            yield self.x[sel], self.y[sel]


def lr_for_epoch(h: Hyperparams, epoch: int) -> float:
    """Stepped decay: base_lr scaled by lr_decay every lr_decay_every epochs."""
    return h.base_lr * h.lr_decay ** (epoch // h.lr_decay_every)


def adam_step(net: Network, lr, beta1=0.9, beta2=0.999, eps=1e-8):
    """Bias-corrected Adam update over every parameter's current gradient."""
    net.adam_t += 1
    t = net.adam_t
    c1 = 1.0 - beta1 ** t
    c2 = 1.0 - beta2 ** t
    for p in net.params():
        p.m *= beta1
        p.m += (1.0 - beta1) * p.grad
        p.v *= beta2
        p.v += (1.0 - beta2) * p.grad * p.grad
        p.value -= lr * (p.m / c1) / (np.sqrt(p.v / c2) + eps)


def _epoch_rng(seed, epoch):
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([seed, epoch]))
    )


def evaluate(net: Network, dataset, batch_size=256) -> float:
    """Accuracy under running statistics; argmax ties pick the lowest index."""
    if len(dataset) == 0:
        raise EmptyDataset("evaluation dataset is empty")
    correct = 0
    total = 0
    for xb, yb in dataset.batches(batch_size):
        logits = net.forward(xb, train=False)
        correct += int((logits.argmax(axis=1) == yb).sum())
        total += len(yb)
    return correct / total


def train(net: Network, dataset, h: Hyperparams, eval_dataset=None,
          log=None) -> list:
    """Run the full schedule; returns one EpochMetrics per epoch."""
    if len(dataset) == 0:
        raise EmptyDataset("training dataset is empty")
    metrics = []
    for epoch in range(h.epochs):
        lr = lr_for_epoch(h, epoch)
        rng = _epoch_rng(h.seed, epoch)
        loss_sum = 0.0
        correct = 0
        seen = 0
        steps = 0
        t0 = time.perf_counter()
        for xb, yb in dataset.batches(h.batch_size, rng):
            logits = net.forward(xb, train=True)
            loss, dlogits = softmax_xent(logits, yb)
            net.backward(dlogits)
            adam_step(net, lr, h.beta1, h.beta2, h.eps)
            loss_sum += loss * len(yb)
            correct += int((logits.argmax(axis=1) == yb).sum())
            seen += len(yb)
            steps += 1
        seconds = time.perf_counter() - t0

        eval_acc = float("nan")
        eval_seconds = 0.0
        if eval_dataset is not None:
            t1 = time.perf_counter()
            eval_acc = evaluate(net, eval_dataset)
            eval_seconds = time.perf_counter() - t1

        em = EpochMetrics(
            epoch=epoch,
            mean_loss=loss_sum / seen,
            train_acc=correct / seen,
            eval_acc=eval_acc,
            seconds=seconds,
            eval_seconds=eval_seconds,
            steps=steps,
        )
        metrics.append(em)
        if log is not None:
            log(em)
    return metrics
