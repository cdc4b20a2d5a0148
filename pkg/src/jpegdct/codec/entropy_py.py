"""Pure-Python entropy kernels: scan decode and encode.

Functionally identical to the compiled ``_entropy`` extension; this module is
the fallback selected at import time when the extension is unavailable (or
when ``JPEGDCT_PURE`` is set).  Interface contract shared by both backends:

``decode_scan`` fills ``out`` (int32, shape (total_blocks, 64)) with natural-
order coefficient blocks, DC prediction undone, one row per block, components
concatenated in scan order, blocks row-major within each component grid.

``encode_scan`` is its inverse: it serializes quantized blocks into an
entropy-coded payload with byte stuffing (and optional restart markers).
"""

import numpy as np

from .errors import (
    BadRestartMarker,
    BitstreamExhausted,
    InvalidHuffmanCode,
)
from .tables import NATURAL_FROM_ZIGZAG

BACKEND_NAME = "pure-python"

_NAT_FROM_ZZ = [int(i) for i in NATURAL_FROM_ZIGZAG]


class _BitReader:
    """MSB-first bit reader over stuffed entropy data."""

    __slots__ = ("data", "n", "pos", "buf", "cnt")

    def __init__(self, data):
        self.data = data
        self.n = len(data)
        self.pos = 0
        self.buf = 0
        self.cnt = 0

    def bits(self, nbits):
        while self.cnt < nbits:
            if self.pos >= self.n:
                raise BitstreamExhausted("entropy data ended mid-block")
            b = self.data[self.pos]
            self.pos += 1
            if b == 0xFF:
                if self.pos >= self.n:
                    raise BitstreamExhausted("dangling 0xFF at end of scan")
                if self.data[self.pos] == 0x00:
                    self.pos += 1  # stuffed byte
                else:
                    self.pos -= 1  # rewind to the marker
                    raise BitstreamExhausted(
                        "marker encountered inside entropy-coded data"
                    )
            self.buf = ((self.buf << 8) | b) & 0xFFFFFFFF
            self.cnt += 8
        self.cnt -= nbits
        return (self.buf >> self.cnt) & ((1 << nbits) - 1)

    def align_and_expect_restart(self, m):
        """Skip padding bits, consume the expected RSTm marker."""
        self.cnt = 0
        if self.pos + 2 > self.n:
            raise BadRestartMarker("scan ended where RST marker expected")
        b0 = self.data[self.pos]
        b1 = self.data[self.pos + 1]
        if b0 != 0xFF or b1 != (0xD0 | m):
            raise BadRestartMarker(
                f"expected RST{m}, found bytes {b0:#04x} {b1:#04x}"
            )
        self.pos += 2


def _decode_symbol(reader, mincode, maxcode, valptr, values):
    code = reader.bits(1)
    length = 1
    while code > maxcode[length]:
        length += 1
        if length > 16:
            raise InvalidHuffmanCode("code longer than 16 bits")
        code = (code << 1) | reader.bits(1)
    return int(values[valptr[length] + code - mincode[length]])


def _extend(value, size):
    if value < (1 << (size - 1)):
        return value - (1 << size) + 1
    return value


def decode_scan(
    data,
    comp_h,
    comp_v,
    comp_bw,
    comp_bh,
    comp_dc,
    comp_ac,
    dc_min,
    dc_max,
    dc_valptr,
    dc_vals,
    ac_min,
    ac_max,
    ac_valptr,
    ac_vals,
    mcus_x,
    mcus_y,
    restart_interval,
    out,
):
    nc = len(comp_h)
    offs = [0] * nc
    acc = 0
    for c in range(nc):
        offs[c] = acc
        acc += int(comp_bw[c]) * int(comp_bh[c])

    reader = _BitReader(data)
    preds = [0] * nc
    rst_m = 0
    nat = _NAT_FROM_ZZ
    mcu_index = 0

    for mcu_y in range(mcus_y):
        for mcu_x in range(mcus_x):
            if restart_interval and mcu_index and mcu_index % restart_interval == 0:
                reader.align_and_expect_restart(rst_m)
                rst_m = (rst_m + 1) & 7
                preds = [0] * nc
            for c in range(nc):
                dci = comp_dc[c]
                aci = comp_ac[c]
                dmn, dmx = dc_min[dci], dc_max[dci]
                dvp, dvl = dc_valptr[dci], dc_vals[dci]
                amn, amx = ac_min[aci], ac_max[aci]
                avp, avl = ac_valptr[aci], ac_vals[aci]
                bw = int(comp_bw[c])
                for vy in range(comp_v[c]):
                    for hx in range(comp_h[c]):
                        row = out[
                            offs[c]
                            + (mcu_y * comp_v[c] + vy) * bw
                            + (mcu_x * comp_h[c] + hx)
                        ]
                        t = _decode_symbol(reader, dmn, dmx, dvp, dvl)
                        if t > 15:
                            raise InvalidHuffmanCode(
                                f"DC magnitude category {t}"
                            )
                        if t:
                            preds[c] += _extend(reader.bits(t), t)
                        row[0] = preds[c]
                        k = 1
                        while k < 64:
                            rs = _decode_symbol(reader, amn, amx, avp, avl)
                            r = rs >> 4
                            s = rs & 15
                            if s == 0:
                                if r == 15:
                                    k += 16
                                    continue
                                break  # EOB
                            k += r
                            if k > 63:
                                raise InvalidHuffmanCode(
                                    "AC run past end of block"
                                )
                            row[nat[k]] = _extend(reader.bits(s), s)
                            k += 1
            mcu_index += 1


class _BitWriter:
    """MSB-first bit writer with 0xFF byte stuffing."""

    __slots__ = ("out", "acc", "cnt")

    def __init__(self):
        self.out = bytearray()
        self.acc = 0
        self.cnt = 0

    def put(self, code, size):
        if size == 0:
            return
        self.acc = ((self.acc << size) | (code & ((1 << size) - 1)))
        self.cnt += size
        while self.cnt >= 8:
            self.cnt -= 8
            byte = (self.acc >> self.cnt) & 0xFF
            self.out.append(byte)
            if byte == 0xFF:
                self.out.append(0x00)
        self.acc &= (1 << self.cnt) - 1

    def flush(self):
        if self.cnt:
            pad = 8 - self.cnt
            self.put((1 << pad) - 1, pad)

    def restart(self, m):
        self.flush()
        self.out.append(0xFF)
        self.out.append(0xD0 | m)


def _category(value):
    return int(value).bit_length() if value >= 0 else int(-value).bit_length()


def encode_scan(
    comp_h,
    comp_v,
    comp_bw,
    comp_bh,
    comp_dc,
    comp_ac,
    dc_codes,
    dc_sizes,
    ac_codes,
    ac_sizes,
    blocks,
    mcus_x,
    mcus_y,
    restart_interval,
):
    nc = len(comp_h)
    offs = [0] * nc
    acc = 0
    for c in range(nc):
        offs[c] = acc
        acc += int(comp_bw[c]) * int(comp_bh[c])

    writer = _BitWriter()
    preds = [0] * nc
    rst_m = 0
    nat = _NAT_FROM_ZZ
    total_mcus = mcus_x * mcus_y
    mcu_index = 0

    for mcu_y in range(mcus_y):
        for mcu_x in range(mcus_x):
            for c in range(nc):
                dci = comp_dc[c]
                aci = comp_ac[c]
                dcd, dsz = dc_codes[dci], dc_sizes[dci]
                acd, asz = ac_codes[aci], ac_sizes[aci]
                bw = int(comp_bw[c])
                for vy in range(comp_v[c]):
                    for hx in range(comp_h[c]):
                        row = blocks[
                            offs[c]
                            + (mcu_y * comp_v[c] + vy) * bw
                            + (mcu_x * comp_h[c] + hx)
                        ]
                        dc = int(row[0])
                        diff = dc - preds[c]
                        preds[c] = dc
                        t = _category(diff)
                        if dsz[t] == 0:
                            raise InvalidHuffmanCode(
                                f"DC category {t} missing from table"
                            )
                        writer.put(int(dcd[t]), int(dsz[t]))
                        if t:
                            writer.put(
                                diff if diff >= 0 else diff + (1 << t) - 1, t
                            )
                        run = 0
                        for k in range(1, 64):
                            v = int(row[nat[k]])
                            if v == 0:
                                run += 1
                                continue
                            while run > 15:
                                writer.put(int(acd[0xF0]), int(asz[0xF0]))
                                run -= 16
                            s = _category(v)
                            sym = (run << 4) | s
                            if asz[sym] == 0:
                                raise InvalidHuffmanCode(
                                    f"AC symbol {sym:#04x} missing from table"
                                )
                            writer.put(int(acd[sym]), int(asz[sym]))
                            writer.put(v if v >= 0 else v + (1 << s) - 1, s)
                            run = 0
                        if run:
                            writer.put(int(acd[0x00]), int(asz[0x00]))
            mcu_index += 1
            if (
                restart_interval
                and mcu_index % restart_interval == 0
                and mcu_index < total_mcus
            ):
                writer.restart(rst_m)
                rst_m = (rst_m + 1) & 7
                preds = [0] * nc

    writer.flush()
    return bytes(writer.out)
