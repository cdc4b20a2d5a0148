"""Partial decoding: entropy decode a scan into coefficient grids.

This is the early exit of the decode path: Huffman decoding, run-length
expansion, DC prediction reversal, and zigzag reordering are applied, but
nothing downstream of them (no de-quantization, no inverse DCT).
"""

import numpy as np

from . import backend as _backend
from .errors import BadTableSlot
from .huffman import build_huffman_decoder, decoder_arrays
from .types import CoefficientGrid, CompressedImage


def scan_geometry(img: CompressedImage):
    """MCU grid and padded per-component block dimensions for the scan.

    Returns (mcus_x, mcus_y, comp_h, comp_v, comp_bw, comp_bh) where the
    sampling factors are all 1 for a single-component (non-interleaved)
    scan, matching how the MCU loop walks it.
    """
    frame = img.frame
    comps = [
        next(c for c in frame.components if c.component_id == sc.component_id)
        for sc in img.scan
    ]
    if len(comps) == 1:
        comp = comps[0]
        w, h = frame.component_size(comp)
        bw, bh = -(-w // 8), -(-h // 8)
        return bw, bh, [1], [1], [bw], [bh]
    h_max, v_max = frame.h_max, frame.v_max
    mcus_x = -(-frame.width // (8 * h_max))
    mcus_y = -(-frame.height // (8 * v_max))
    comp_h = [c.h for c in comps]
    comp_v = [c.v for c in comps]
    comp_bw = [mcus_x * c.h for c in comps]
    comp_bh = [mcus_y * c.v for c in comps]
    return mcus_x, mcus_y, comp_h, comp_v, comp_bw, comp_bh


def decode_coefficients(img: CompressedImage, backend=None) -> list:
    """Entropy-decode the scan into one CoefficientGrid per component.

    Grids cover the padded MCU extent and hold quantized coefficients in
    natural order, DC prediction already undone.  ``backend`` selects the
    entropy kernel implementation ("compiled" / "pure" / None for active).
    """
    kern = _backend.get_backend(backend)
    frame = img.frame
    mcus_x, mcus_y, comp_h, comp_v, comp_bw, comp_bh = scan_geometry(img)

    dc_ids, ac_ids = [], []
    for sc in img.scan:
        if sc.dc_id not in img.dc_tables:
            raise BadTableSlot(f"undefined DC table {sc.dc_id}")
        if sc.ac_id not in img.ac_tables:
            raise BadTableSlot(f"undefined AC table {sc.ac_id}")
        if sc.dc_id not in dc_ids:
            dc_ids.append(sc.dc_id)
        if sc.ac_id not in ac_ids:
            ac_ids.append(sc.ac_id)

    dc_codecs = [build_huffman_decoder(img.dc_tables[i]) for i in dc_ids]
    ac_codecs = [build_huffman_decoder(img.ac_tables[i]) for i in ac_ids]
    dc_min, dc_max, dc_valptr, dc_vals = decoder_arrays(dc_codecs)
    ac_min, ac_max, ac_valptr, ac_vals = decoder_arrays(ac_codecs)
    comp_dc = np.array(
        [dc_ids.index(sc.dc_id) for sc in img.scan], dtype=np.int32
    )
    comp_ac = np.array(
        [ac_ids.index(sc.ac_id) for sc in img.scan], dtype=np.int32
    )

    total_blocks = sum(w * h for w, h in zip(comp_bw, comp_bh))
    out = np.zeros((total_blocks, 64), dtype=np.int32)

    kern.decode_scan(
        img.entropy_data,
        np.asarray(comp_h, dtype=np.int32),
        np.asarray(comp_v, dtype=np.int32),
        np.asarray(comp_bw, dtype=np.int32),
        np.asarray(comp_bh, dtype=np.int32),
        comp_dc,
        comp_ac,
        dc_min, dc_max, dc_valptr, dc_vals,
        ac_min, ac_max, ac_valptr, ac_vals,
        mcus_x, mcus_y, img.restart_interval,
        out,
    )

    grids = []
    offset = 0
    comp_by_id = {c.component_id: c for c in frame.components}
    for i, sc in enumerate(img.scan):
        bw, bh = comp_bw[i], comp_bh[i]
        blocks = out[offset : offset + bw * bh].reshape(bh, bw, 8, 8)
        offset += bw * bh
        grids.append(
            CoefficientGrid(
                component_id=sc.component_id,
                blocks_wide=bw,
                blocks_high=bh,
                blocks=blocks,
                quant_id=comp_by_id[sc.component_id].quant_id,
            )
        )
    return grids
