"""CIFAR-10 binary batch ingestion (3073-byte records, channel-planar)."""

import os
from dataclasses import dataclass

import numpy as np

from .errors import BadRecordSize, LabelOutOfRange

RECORD_BYTES = 3073  # 1 label byte + 3 x 1024 channel-planar pixels
NUM_CLASSES = 10
TRAIN_FILES = tuple(f"data_batch_{i}.bin" for i in range(1, 6))
TEST_FILES = ("test_batch.bin",)


@dataclass
class LabeledImage:
    label: int
    pixels: np.ndarray  # (H, W, 3) uint8
    source_id: str


def read_batch_file(path) -> list:
    """Decode one binary batch file into LabeledImages."""
    raw = np.fromfile(path, dtype=np.uint8)
    if raw.size == 0 or raw.size % RECORD_BYTES:
        raise BadRecordSize(
            f"{path}: {raw.size} bytes is not a multiple of {RECORD_BYTES}"
        )
    records = raw.reshape(-1, RECORD_BYTES)
    labels = records[:, 0]
    if labels.max(initial=0) >= NUM_CLASSES:
        raise LabelOutOfRange(
            f"{path}: label {labels.max()} >= {NUM_CLASSES}"
        )
    pixels = records[:, 1:].reshape(-1, 3, 32, 32).transpose(0, 2, 3, 1)
    name = os.path.basename(path)
    return [
        LabeledImage(int(labels[i]), pixels[i], f"{name}#{i}")
        for i in range(records.shape[0])
    ]


def load_cifar10(directory):
    """Load the published train/test splits from a batch directory.

    Returns (train, test) LabeledImage lists.
    """
    train = []
    for fname in TRAIN_FILES:
        train.extend(read_batch_file(os.path.join(directory, fname)))
    test = []
    for fname in TEST_FILES:
        test.extend(read_batch_file(os.path.join(directory, fname)))
    return train, test


def write_batch_file(images, path):
    """Serialize LabeledImages into the binary batch record format."""
    records = np.zeros((len(images), RECORD_BYTES), dtype=np.uint8)
    for i, img in enumerate(images):
        if img.pixels.shape != (32, 32, 3):
            raise ValueError(f"image {i} is {img.pixels.shape}, need 32x32x3")
        records[i, 0] = img.label
        records[i, 1:] = img.pixels.transpose(2, 0, 1).reshape(-1)
    records.tofile(path)
