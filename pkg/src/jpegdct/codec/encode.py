"""Baseline JFIF encoder: forward DCT, quantization, entropy coding.

The encoder always emits the annex "typical" Huffman tables and a JFIF v1.01
APP0, so its output is readable by any stock decoder.  Quantization tables
are caller-supplied, which is how the all-ones ("un-quantized") corpus
variant is produced.
"""

import numpy as np

from . import backend as _backend
from . import tables as T
from .errors import DimensionMismatch, SampleOutOfRange
from .huffman import build_huffman_encoder, encoder_arrays
from .types import Component, FrameInfo, HuffTable, QuantTable

_DCT_BASIS = None


def dct_matrix() -> np.ndarray:
    """8x8 orthonormal DCT-II basis matrix (float64)."""
    global _DCT_BASIS
    if _DCT_BASIS is None:
        x = np.arange(8)
        u = x[:, None]
        m = np.cos((2 * x[None, :] + 1) * u * np.pi / 16) / 2
        m[0] /= np.sqrt(2)
        _DCT_BASIS = m
    return _DCT_BASIS


def standard_tables(quality: int) -> tuple:
    """(luma, chroma) QuantTables: annex tables scaled to a quality level."""
    luma = T.natural_to_zigzag_flat(
        T.scaled_quant_steps(T.STD_LUMA_QUANT_NATURAL, quality)
    )
    chroma = T.natural_to_zigzag_flat(
        T.scaled_quant_steps(T.STD_CHROMA_QUANT_NATURAL, quality)
    )
    return QuantTable(0, luma), QuantTable(1, chroma)


def unit_tables() -> tuple:
    """(luma, chroma) all-ones tables: quantization is a no-op."""
    return (
        QuantTable(0, T.unit_quant_steps()),
        QuantTable(1, T.unit_quant_steps()),
    )


def _frame_for(planes, subsampling) -> FrameInfo:
    h, w = planes[0].shape
    if len(planes) == 1:
        comps = (Component(1, 1, 1, 0),)
    elif len(planes) == 3:
        ych, ycw = planes[1].shape
        if subsampling == "420":
            want = (-(-h // 2), -(-w // 2))
            y_sampling = (2, 2)
        elif subsampling == "444":
            want = (h, w)
            y_sampling = (1, 1)
        else:
            raise ValueError(f"subsampling must be 420 or 444, got {subsampling!r}")
        for p in planes[1:]:
            if p.shape != want:
                raise DimensionMismatch(
                    f"chroma plane {p.shape} does not match {want} "
                    f"for {subsampling} subsampling"
                )
        comps = (
            Component(1, y_sampling[0], y_sampling[1], 0),
            Component(2, 1, 1, 1),
            Component(3, 1, 1, 1),
        )
    else:
        raise DimensionMismatch(f"{len(planes)} planes (need 1 or 3)")
    return FrameInfo(w, h, 8, comps)


def _pad_to(plane, height, width):
    h, w = plane.shape
    return np.pad(plane, ((0, height - h), (0, width - w)), mode="edge")


def blockify(plane: np.ndarray) -> np.ndarray:
    """(H, W) raster -> (H/8, W/8, 8, 8) blocks; dims must be multiples of 8."""
    h, w = plane.shape
    return plane.reshape(h // 8, 8, w // 8, 8).transpose(0, 2, 1, 3)


def unblockify(blocks: np.ndarray) -> np.ndarray:
    """(BH, BW, 8, 8) blocks -> (8*BH, 8*BW) raster."""
    bh, bw = blocks.shape[:2]
    return blocks.transpose(0, 2, 1, 3).reshape(bh * 8, bw * 8)


def fdct_blocks(blocks: np.ndarray) -> np.ndarray:
    """Orthonormal forward DCT over stacked (..., 8, 8) sample blocks."""
    d = dct_matrix()
    return d @ blocks @ d.T


def forward_coefficients(planes, quant_tables, subsampling="420"):
    """Quantized coefficient blocks exactly as the encoder will emit them.

    Returns (frame, grids) where grids is a list of (blocks_high, blocks_wide,
    8, 8) int32 arrays in natural order, one per component, covering the
    padded MCU extent.  AC values are clamped to +-1023 so every magnitude
    stays codable with the annex tables even for all-ones quantization.
    """
    planes = [np.asarray(p) for p in planes]
    for p in planes:
        if p.ndim != 2:
            raise DimensionMismatch("planes must be 2-D sample arrays")
        if p.dtype != np.uint8:
            if np.issubdtype(p.dtype, np.floating):
                raise SampleOutOfRange("planes must be integer samples")
            if p.size and (p.min() < 0 or p.max() > 255):
                raise SampleOutOfRange("samples must be in [0, 255]")
    frame = _frame_for(planes, subsampling)
    if len(quant_tables) < len({c.quant_id for c in frame.components}):
        raise DimensionMismatch("not enough quantization tables supplied")

    h_max, v_max = frame.h_max, frame.v_max
    mcus_x = -(-frame.width // (8 * h_max))
    mcus_y = -(-frame.height // (8 * v_max))
    tables_by_id = {t.table_id: t for t in quant_tables}

    grids = []
    for comp, plane in zip(frame.components, planes):
        bw = mcus_x * comp.h if len(planes) > 1 else -(-plane.shape[1] // 8)
        bh = mcus_y * comp.v if len(planes) > 1 else -(-plane.shape[0] // 8)
        padded = _pad_to(plane, bh * 8, bw * 8)
        shifted = padded.astype(np.float64) - 128.0
        coef = fdct_blocks(blockify(shifted))
        steps = tables_by_id[comp.quant_id].steps_natural
        q = np.rint(coef / steps).astype(np.int32)
        dc = q[:, :, 0, 0].copy()
        np.clip(q, -1023, 1023, out=q)
        q[:, :, 0, 0] = dc
        grids.append(np.ascontiguousarray(q))
    return frame, grids


def _seg(marker, payload=b""):
    length = len(payload) + 2
    return bytes([0xFF, marker, length >> 8, length & 0xFF]) + payload


def _app0_jfif():
    return _seg(0xE0, b"JFIF\x00\x01\x01\x00\x00\x01\x00\x01\x00\x00")


def _dqt(table: QuantTable):
    return _seg(0xDB, bytes([table.table_id]) + bytes(int(s) for s in table.steps))


def _sof0(frame: FrameInfo):
    body = bytearray(
        [8, frame.height >> 8, frame.height & 0xFF,
         frame.width >> 8, frame.width & 0xFF, len(frame.components)]
    )
    for c in frame.components:
        body += bytes([c.component_id, (c.h << 4) | c.v, c.quant_id])
    return _seg(0xC0, bytes(body))


def _dht(table: HuffTable):
    tc = 0 if table.table_class == "dc" else 1
    body = bytes([(tc << 4) | table.table_id]) + bytes(table.bits) + bytes(
        table.huffval
    )
    return _seg(0xC4, body)


def _dri(interval):
    return _seg(0xDD, bytes([interval >> 8, interval & 0xFF]))


def _sos(frame: FrameInfo):
    body = bytearray([len(frame.components)])
    for c in frame.components:
        table_slot = 0 if c.quant_id == 0 else 1
        body += bytes([c.component_id, (table_slot << 4) | table_slot])
    body += bytes([0, 63, 0])
    return _seg(0xDA, bytes(body))


def _std_huff_tables(ncomp):
    dc0 = HuffTable("dc", 0, T.STD_DC_LUMA_BITS, T.STD_DC_LUMA_VALS)
    ac0 = HuffTable("ac", 0, T.STD_AC_LUMA_BITS, T.STD_AC_LUMA_VALS)
    if ncomp == 1:
        return [dc0], [ac0]
    dc1 = HuffTable("dc", 1, T.STD_DC_CHROMA_BITS, T.STD_DC_CHROMA_VALS)
    ac1 = HuffTable("ac", 1, T.STD_AC_CHROMA_BITS, T.STD_AC_CHROMA_VALS)
    return [dc0, dc1], [ac0, ac1]


def encode_jpeg(planes, quant_tables, subsampling="420", restart_interval=0,
                backend=None) -> bytes:
    """Encode component pixel planes into a baseline JFIF byte stream.

    ``planes`` is [Y] (grayscale) or [Y, Cb, Cr] with chroma already
    subsampled to match ``subsampling``.  ``quant_tables`` supplies the
    QuantTable for each referenced slot (luma 0, chroma 1).
    """
    kern = _backend.get_backend(backend)
    frame, grids = forward_coefficients(planes, quant_tables, subsampling)
    ncomp = len(frame.components)
    dc_tabs, ac_tabs = _std_huff_tables(ncomp)
    dc_codes, dc_sizes = encoder_arrays(
        [build_huffman_encoder(t) for t in dc_tabs]
    )
    ac_codes, ac_sizes = encoder_arrays(
        [build_huffman_encoder(t) for t in ac_tabs]
    )

    if ncomp == 1:
        comp_h = comp_v = np.array([1], dtype=np.int32)
        comp_bw = np.array([grids[0].shape[1]], dtype=np.int32)
        comp_bh = np.array([grids[0].shape[0]], dtype=np.int32)
        mcus_x, mcus_y = int(comp_bw[0]), int(comp_bh[0])
        comp_dc = comp_ac = np.array([0], dtype=np.int32)
    else:
        comp_h = np.array([c.h for c in frame.components], dtype=np.int32)
        comp_v = np.array([c.v for c in frame.components], dtype=np.int32)
        comp_bw = np.array([g.shape[1] for g in grids], dtype=np.int32)
        comp_bh = np.array([g.shape[0] for g in grids], dtype=np.int32)
        mcus_x = -(-frame.width // (8 * frame.h_max))
        mcus_y = -(-frame.height // (8 * frame.v_max))
        comp_dc = comp_ac = np.array([0, 1, 1], dtype=np.int32)

    flat = np.concatenate([g.reshape(-1, 64) for g in grids])
    flat = np.ascontiguousarray(flat, dtype=np.int32)
    payload = kern.encode_scan(
        comp_h, comp_v, comp_bw, comp_bh, comp_dc, comp_ac,
        dc_codes, dc_sizes, ac_codes, ac_sizes,
        flat, mcus_x, mcus_y, restart_interval,
    )

    out = bytearray(b"\xFF\xD8")
    out += _app0_jfif()
    used_q = []
    for c in frame.components:
        if c.quant_id not in used_q:
            used_q.append(c.quant_id)
    tables_by_id = {t.table_id: t for t in quant_tables}
    for qid in used_q:
        out += _dqt(tables_by_id[qid])
    out += _sof0(frame)
    for t in dc_tabs:
        out += _dht(t)
    for t in ac_tabs:
        out += _dht(t)
    if restart_interval:
        out += _dri(restart_interval)
    out += _sos(frame)
    out += payload
    out += b"\xFF\xD9"
    return bytes(out)
