"""Minimal deterministic CNN engine for coefficient-tensor classification."""

from .errors import (
    BadArchConfig,
    EmptyDataset,
    LabelOutOfRange,
    NnError,
    ShapeMismatch,
)
from .layers import softmax, softmax_xent
from .network import (
    DEFAULT_ARCH,
    Network,
    build_dct_cnn,
    load_checkpoint,
    parse_arch,
    save_checkpoint,
)
from .training import (
    ArrayDataset,
    EpochMetrics,
    Hyperparams,
    adam_step,
    evaluate,
    lr_for_epoch,
    train,
)

__all__ = [
    "ArrayDataset",
    "BadArchConfig",
    "DEFAULT_ARCH",
    "EmptyDataset",
    "EpochMetrics",
    "Hyperparams",
    "LabelOutOfRange",
    "Network",
    "NnError",
    "ShapeMismatch",
    "adam_step",
    "build_dct_cnn",
    "evaluate",
    "load_checkpoint",
    "lr_for_epoch",
    "parse_arch",
    "save_checkpoint",
    "softmax",
    "softmax_xent",
    "train",
]
