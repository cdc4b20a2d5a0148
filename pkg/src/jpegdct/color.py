"""JFIF (BT.601 full-range) color conversion and chroma resampling."""

import numpy as np


def ycbcr_from_rgb(rgb: np.ndarray) -> np.ndarray:
    """(H, W, 3) uint8 RGB -> (H, W, 3) uint8 YCbCr, full range."""
    r = rgb[..., 0].astype(np.float64)
    g = rgb[..., 1].astype(np.float64)
    b = rgb[..., 2].astype(np.float64)
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 - 0.168735892 * r - 0.331264108 * g + 0.5 * b
    cr = 128.0 + 0.5 * r - 0.418687589 * g - 0.081312411 * b
    out = np.stack([y, cb, cr], axis=-1)
    return np.clip(np.round(out), 0, 255).astype(np.uint8)


def rgb_from_ycbcr(y: np.ndarray, cb: np.ndarray, cr: np.ndarray) -> np.ndarray:
    """Same-size Y/Cb/Cr sample planes -> (H, W, 3) uint8 RGB."""
    y = y.astype(np.float64)
    d_b = cb.astype(np.float64) - 128.0
    d_r = cr.astype(np.float64) - 128.0
    r = y + 1.402 * d_r
    g = y - 0.344136286 * d_b - 0.714136286 * d_r
    b = y + 1.772 * d_b
    out = np.stack([r, g, b], axis=-1)
    return np.clip(np.round(out), 0, 255).astype(np.uint8)


def subsample_2x2_mean(plane: np.ndarray) -> np.ndarray:
    """Halve a sample plane with 2x2 averaging (odd edges replicated)."""
    h, w = plane.shape
    if h % 2 or w % 2:
        plane = np.pad(plane, ((0, h % 2), (0, w % 2)), mode="edge")
        h, w = plane.shape
    cells = plane.astype(np.float64).reshape(h // 2, 2, w // 2, 2)
    return np.clip(np.round(cells.mean(axis=(1, 3))), 0, 255).astype(np.uint8)


def replicate_2x(plane: np.ndarray) -> np.ndarray:
    """Double a sample plane with nearest-neighbor replication."""
    return np.repeat(np.repeat(plane, 2, axis=0), 2, axis=1)


def ycbcr_planes_from_rgb(rgb: np.ndarray, subsampling: str = "420") -> list:
    """RGB image -> [Y, Cb, Cr] planes, chroma subsampled as requested."""
    ycc = ycbcr_from_rgb(rgb)
    y, cb, cr = ycc[..., 0], ycc[..., 1], ycc[..., 2]
    if subsampling == "420":
        return [y, subsample_2x2_mean(cb), subsample_2x2_mean(cr)]
    if subsampling == "444":
        return [y, cb, cr]
    raise ValueError(f"subsampling must be 420 or 444, got {subsampling!r}")
