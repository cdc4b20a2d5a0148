"""Folder-of-JPEGs ingestion: one subdirectory per class.

Files are decoded with this package's own full decode path and resized
bilinearly to a fixed square; undecodable files are skipped with a warning
and counted (ingestion is tolerant, training streams are not).
"""

import logging
import os

import numpy as np

from ..codec import JpegError, parse_jpeg
from ..dctdomain import DctDomainError, full_decode
from .cifar10 import LabeledImage

logger = logging.getLogger(__name__)


def bilinear_resize(image: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Edge-clamped bilinear resampling of an (H, W, C) uint8 image."""
    h, w = image.shape[:2]
    src = image.astype(np.float64)
    ys = np.clip((np.arange(out_h) + 0.5) * h / out_h - 0.5, 0, h - 1)
    xs = np.clip((np.arange(out_w) + 0.5) * w / out_w - 0.5, 0, w - 1)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = (ys - y0)[:, None, None]
    fx = (xs - x0)[None, :, None]
    top = src[y0][:, x0] * (1 - fx) + src[y0][:, x1] * fx
    bottom = src[y1][:, x0] * (1 - fx) + src[y1][:, x1] * fx
    out = top * (1 - fy) + bottom * fy
    return np.clip(np.round(out), 0, 255).astype(np.uint8)


def load_jpeg_folder(directory, target_size=224):
    """Ingest class-per-subfolder JPEGs.

    Returns (images, class_names, skipped) where class indices follow the
    sorted subfolder names.
    """
    class_names = sorted(
        d for d in os.listdir(directory)
        if os.path.isdir(os.path.join(directory, d))
    )
    images = []
    skipped = 0
    for label, cname in enumerate(class_names):
        cdir = os.path.join(directory, cname)
        for fname in sorted(os.listdir(cdir)):
            path = os.path.join(cdir, fname)
            if not os.path.isfile(path):
                continue
            try:
                with open(path, "rb") as fh:
                    rgb = full_decode(parse_jpeg(fh.read()))
            except (JpegError, DctDomainError, OSError) as exc:
                logger.warning("skipping undecodable file %s: %s", path, exc)
                skipped += 1
                continue
            pixels = bilinear_resize(rgb, target_size, target_size)
            images.append(LabeledImage(label, pixels, f"{cname}/{fname}"))
    return images, class_names, skipped
