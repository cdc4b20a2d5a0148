"""Canonical Huffman code construction for baseline JPEG tables.

Codes are assigned in ascending length order, left to right, exactly as the
DHT segment implies.  The resulting codec carries both the decode arrays
(mincode/maxcode/valptr, the classic table-driven decoder layout) and the
encode arrays (code word + length per symbol).
"""

import numpy as np

from .errors import OverfullCodeSpace
from .types import HuffTable


class HuffmanCodec:
    """Decode/encode structures for one canonical table."""

    def __init__(self, table: HuffTable):
        bits = table.bits
        if sum(bits) > 256:
            raise OverfullCodeSpace("more than 256 symbols")
        avail = 2
        for length, count in enumerate(bits, start=1):
            if count > avail:
                raise OverfullCodeSpace(
                    f"{count} codes of length {length} exceed the "
                    f"{avail} available"
                )
            avail = (avail - count) * 2

        self.table = table
        self.mincode = np.zeros(17, dtype=np.int32)
        self.maxcode = np.full(17, -1, dtype=np.int32)
        self.valptr = np.zeros(17, dtype=np.int32)
        self.values = np.zeros(256, dtype=np.uint8)
        self.values[: len(table.huffval)] = table.huffval

        # Encode side: code word and length per symbol value.
        self.code_of = np.full(256, -1, dtype=np.int32)
        self.size_of = np.zeros(256, dtype=np.uint8)

        code = 0
        k = 0
        for length, count in enumerate(bits, start=1):
            if count:
                self.valptr[length] = k
                self.mincode[length] = code
                for _ in range(count):
                    sym = table.huffval[k]
                    self.code_of[sym] = code
                    self.size_of[sym] = length
                    code += 1
                    k += 1
                self.maxcode[length] = code - 1
            code <<= 1

    def symbol_codes(self) -> dict:
        """symbol -> code word as a bit string (for inspection/tests)."""
        out = {}
        for sym in self.table.huffval:
            size = int(self.size_of[sym])
            out[sym] = format(int(self.code_of[sym]), f"0{size}b")
        return out

    def decode_bits(self, bits: str) -> tuple:
        """Decode one symbol from a bit string; returns (symbol, consumed)."""
        code = 0
        for length, ch in enumerate(bits, start=1):
            if length > 16:
                break
            code = (code << 1) | (ch == "1")
            if code <= self.maxcode[length]:
                idx = self.valptr[length] + code - self.mincode[length]
                return int(self.values[idx]), length
        raise OverfullCodeSpace("bit string is not a complete code")


def build_huffman_decoder(table: HuffTable) -> HuffmanCodec:
    """Validate a table and build its decode structure."""
    return HuffmanCodec(table)


def build_huffman_encoder(table: HuffTable) -> HuffmanCodec:
    """Same structure as the decoder; kept for call-site clarity."""
    return HuffmanCodec(table)


def decoder_arrays(codecs: list) -> tuple:
    """Stack decode tables for the entropy kernels.

    Returns (mincode, maxcode, valptr, values) with one row per codec.
    """
    n = len(codecs)
    mincode = np.zeros((n, 17), dtype=np.int32)
    maxcode = np.zeros((n, 17), dtype=np.int32)
    valptr = np.zeros((n, 17), dtype=np.int32)
    values = np.zeros((n, 256), dtype=np.uint8)
    for i, c in enumerate(codecs):
        mincode[i] = c.mincode
        maxcode[i] = c.maxcode
        valptr[i] = c.valptr
        values[i] = c.values
    return mincode, maxcode, valptr, values


def encoder_arrays(codecs: list) -> tuple:
    """Stack encode tables: (codes, sizes), one row per codec."""
    n = len(codecs)
    codes = np.zeros((n, 256), dtype=np.int32)
    sizes = np.zeros((n, 256), dtype=np.uint8)
    for i, c in enumerate(codecs):
        codes[i] = c.code_of
        sizes[i] = c.size_of
    return codes, sizes
