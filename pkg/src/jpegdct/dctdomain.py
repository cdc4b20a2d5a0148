"""DCT-domain stage: coefficient grids -> network-ready tensors.

Coefficient planes use a spatial block layout: the coefficient for frequency
(u, v) of block (bx, by) sits at row 8*by+v, column 8*bx+u, so a W x H image
yields a W x H luma plane.  Dimension matching between luma and chroma is
done either by halving the luma plane (2x2 mean) or doubling the chroma
planes (replication); the two are exact inverses of one another.

Also hosts the orthonormal 8x8 DCT pair and ``full_decode``, the
conventional decode path used as a pixel-domain baseline and test oracle.
"""

from dataclasses import dataclass

import numpy as np

from . import color
from .codec import tables as _tables
from .codec.decode import decode_coefficients
from .codec.encode import dct_matrix, unblockify
from .codec.types import CoefficientGrid, CompressedImage, QuantTable


class DctDomainError(Exception):
    """Base class for DCT-domain stage errors."""


class TableMismatch(DctDomainError):
    """Quantization table slot does not match the grid's component."""


class WrongLength(DctDomainError):
    """Zigzag sequence is not exactly 64 values."""


class CropExceedsGrid(DctDomainError):
    """Requested crop is larger than the decoded grid extent."""


class OddDimensions(DctDomainError):
    """Plane dimensions must be even to downsample by 2."""


class InconsistentGeometry(DctDomainError):
    """Channel planes are neither equal-size nor in a 2:1 relationship."""


@dataclass
class CoefficientPlane:
    """One channel of coefficients laid out spatially (see module docs)."""

    component_id: int
    values: np.ndarray  # (height, width) float64

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass
class InputTensor:
    """Concatenated Y/Cb/Cr coefficient channels plus a provenance tag."""

    values: np.ndarray  # (height, width, 3) float64
    mode: str  # "downsample" | "upsample" | "direct"

    @property
    def shape(self) -> tuple:
        return self.values.shape


def zigzag_to_natural(seq) -> np.ndarray:
    """64 zigzag-ordered values -> 8x8 block in natural order."""
    seq = np.asarray(seq)
    if seq.size != 64:
        raise WrongLength(f"expected 64 values, got {seq.size}")
    return _tables.zigzag_to_natural_flat(seq.reshape(64)).reshape(8, 8)


def natural_to_zigzag(block) -> np.ndarray:
    """8x8 natural-order block -> 64 values in zigzag scan order."""
    block = np.asarray(block)
    if block.size != 64:
        raise WrongLength(f"expected 64 values, got {block.size}")
    return _tables.natural_to_zigzag_flat(block.reshape(64))


def dequantize(grid: CoefficientGrid, table: QuantTable) -> CoefficientGrid:
    """Multiply each coefficient by its quantization step."""
    if table.table_id != grid.quant_id:
        raise TableMismatch(
            f"grid for component {grid.component_id} uses table slot "
            f"{grid.quant_id}, got table {table.table_id}"
        )
    steps = table.steps_natural.astype(np.int64)
    return CoefficientGrid(
        component_id=grid.component_id,
        blocks_wide=grid.blocks_wide,
        blocks_high=grid.blocks_high,
        blocks=grid.blocks.astype(np.int64) * steps,
        quant_id=grid.quant_id,
    )


def assemble_plane(grid: CoefficientGrid, true_width: int,
                   true_height: int) -> CoefficientPlane:
    """Lay blocks out spatially and crop to whole blocks covering the image.

    The crop target is the true dimensions rounded up to a multiple of 8
    (whole blocks only); the grid itself may be larger because it spans the
    padded MCU extent.
    """
    crop_w = -(-true_width // 8) * 8
    crop_h = -(-true_height // 8) * 8
    if crop_w > grid.blocks_wide * 8 or crop_h > grid.blocks_high * 8:
        raise CropExceedsGrid(
            f"crop {crop_w}x{crop_h} exceeds grid extent "
            f"{grid.blocks_wide * 8}x{grid.blocks_high * 8}"
        )
    raster = unblockify(grid.blocks.astype(np.float64))
    return CoefficientPlane(grid.component_id, raster[:crop_h, :crop_w])


def downsample_plane(plane: CoefficientPlane) -> CoefficientPlane:
    """Halve both dimensions; each output value is a 2x2 cell mean."""
    h, w = plane.values.shape
    if h % 2 or w % 2:
        raise OddDimensions(f"plane is {w}x{h}; dimensions must be even")
    cells = plane.values.reshape(h // 2, 2, w // 2, 2)
    return CoefficientPlane(plane.component_id, cells.mean(axis=(1, 3)))


def upsample_plane(plane: CoefficientPlane) -> CoefficientPlane:
    """Double both dimensions by nearest-neighbor replication."""
    doubled = np.repeat(np.repeat(plane.values, 2, axis=0), 2, axis=1)
    return CoefficientPlane(plane.component_id, doubled)


def assemble_input(y: CoefficientPlane, cb: CoefficientPlane,
                   cr: CoefficientPlane, mode: str) -> InputTensor:
    """Match channel dimensions and stack (Y, Cb, Cr) into one tensor."""
    if mode not in ("downsample", "upsample"):
        raise ValueError(f"mode must be downsample or upsample, got {mode!r}")
    if cb.values.shape != cr.values.shape:
        raise InconsistentGeometry(
            f"chroma planes disagree: {cb.values.shape} vs {cr.values.shape}"
        )
    ys = y.values.shape
    cs = cb.values.shape
    if ys == cs:
        channels = (y, cb, cr)
        tag = "direct"
    elif ys == (2 * cs[0], 2 * cs[1]):
        if mode == "downsample":
            channels = (downsample_plane(y), cb, cr)
        else:
            channels = (y, upsample_plane(cb), upsample_plane(cr))
        tag = mode
    else:
        raise InconsistentGeometry(
            f"luma {ys} and chroma {cs} are neither equal nor 2:1"
        )
    values = np.stack([c.values for c in channels], axis=-1)
    return InputTensor(values, tag)


def fdct_block(samples) -> np.ndarray:
    """Orthonormal 2-D DCT-II of one (or a stack of) 8x8 block(s)."""
    d = dct_matrix()
    return d @ np.asarray(samples, dtype=np.float64) @ d.T


def idct_block(coefficients) -> np.ndarray:
    """Exact inverse of ``fdct_block``."""
    d = dct_matrix()
    return d.T @ np.asarray(coefficients, dtype=np.float64) @ d


def _component_samples(img: CompressedImage, grid: CoefficientGrid):
    """Dequantize, inverse-transform, and crop one component.

    Samples stay real-valued (clamped, not yet rounded) so the final
    rounding happens exactly once, at RGB output.
    """
    frame = img.frame
    comp = next(
        c for c in frame.components if c.component_id == grid.component_id
    )
    table = img.quant_table_for(comp)
    coef = grid.blocks.astype(np.float64) * table.steps_natural
    samples = idct_block(coef) + 128.0
    raster = unblockify(samples)
    cw, ch = frame.component_size(comp)
    raster = np.clip(raster[:ch, :cw], 0.0, 255.0)
    return comp, raster


def full_decode(img: CompressedImage) -> np.ndarray:
    """Conventional decode to (H, W, 3) uint8 RGB.

    Pipeline: entropy decode, de-quantize, inverse DCT, +128 level shift,
    clamp, replication upsample of subsampled components, BT.601 conversion.
    """
    frame = img.frame
    grids = decode_coefficients(img)
    planes = {}
    for grid in grids:
        comp, raster = _component_samples(img, grid)
        if frame.v_max % comp.v or frame.h_max % comp.h:
            raise InconsistentGeometry(
                f"non-integer upsampling ratio for component "
                f"{comp.component_id}"
            )
        fh = frame.v_max // comp.v
        fw = frame.h_max // comp.h
        if fh > 1 or fw > 1:
            raster = np.repeat(np.repeat(raster, fh, axis=0), fw, axis=1)
        planes[comp.component_id] = raster[: frame.height, : frame.width]

    order = [c.component_id for c in frame.components]
    if len(order) == 1:
        gray = np.round(planes[order[0]]).astype(np.uint8)
        return np.stack([gray, gray, gray], axis=-1)
    y, cb, cr = (planes[cid] for cid in order)
    return color.rgb_from_ycbcr(y, cb, cr)
