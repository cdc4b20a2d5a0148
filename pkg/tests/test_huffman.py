"""Canonical Huffman construction and decode/encode consistency."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jpegdct.codec import (
    HuffTable,
    OverfullCodeSpace,
    build_huffman_decoder,
    build_huffman_encoder,
)
from jpegdct.codec import tables as T


def test_two_length2_codes():
    bits = [0, 2] + [0] * 14
    codec = build_huffman_decoder(HuffTable("dc", 0, bits, [5, 9]))
    assert codec.symbol_codes() == {5: "00", 9: "01"}


def test_three_length1_codes_overfull():
    bits = [3] + [0] * 15
    with pytest.raises(OverfullCodeSpace):
        build_huffman_decoder(HuffTable("dc", 0, bits, [1, 2, 3]))


def test_deep_overfull_detected():
    # 2 codes of length 1 leave no room for any longer code
    bits = [2, 1] + [0] * 14
    with pytest.raises(OverfullCodeSpace):
        build_huffman_decoder(HuffTable("dc", 0, bits, [0, 1, 2]))


def test_annex_dc_luma_roundtrip_all_symbols():
    table = HuffTable("dc", 0, T.STD_DC_LUMA_BITS, T.STD_DC_LUMA_VALS)
    codec = build_huffman_decoder(table)
    codes = codec.symbol_codes()
    assert len(codes) == 12
    for sym, bitstring in codes.items():
        decoded, used = codec.decode_bits(bitstring)
        assert decoded == sym
        assert used == len(bitstring)


def test_annex_ac_tables_prefix_free():
    for bits, vals in [
        (T.STD_AC_LUMA_BITS, T.STD_AC_LUMA_VALS),
        (T.STD_AC_CHROMA_BITS, T.STD_AC_CHROMA_VALS),
    ]:
        codec = build_huffman_encoder(HuffTable("ac", 0, bits, vals))
        codes = sorted(codec.symbol_codes().values())
        for a, b in zip(codes, codes[1:]):
            assert not b.startswith(a) or a == b


@st.composite
def valid_tables(draw):
    """Random canonical tables: subset of symbols, Kraft-feasible lengths."""
    n = draw(st.integers(min_value=1, max_value=40))
    symbols = draw(
        st.lists(
            st.integers(min_value=0, max_value=255),
            min_size=n, max_size=n, unique=True,
        )
    )
    bits = [0] * 16
    avail = 2
    remaining = n
    for length in range(1, 17):
        if remaining == 0:
            break
        if length == 16:
            if remaining > avail:
                return None
            bits[15] = remaining
            remaining = 0
            break
        cap = min(avail - 1 if avail > remaining else avail, remaining)
        take = draw(st.integers(min_value=0, max_value=max(0, cap)))
        bits[length - 1] = take
        remaining -= take
        avail = (avail - take) * 2
    if remaining:
        return None
    return HuffTable("ac", 0, bits, symbols)


@settings(max_examples=50, deadline=None)
@given(valid_tables())
def test_random_tables_roundtrip(table):
    if table is None:
        return
    codec = build_huffman_decoder(table)
    codes = codec.symbol_codes()
    # every code decodes to its symbol
    for sym, bitstring in codes.items():
        assert codec.decode_bits(bitstring) == (sym, len(bitstring))
    # prefix-free
    ordered = sorted(codes.values())
    for a, b in zip(ordered, ordered[1:]):
        assert not b.startswith(a)


def test_decoder_arrays_shapes():
    from jpegdct.codec.huffman import decoder_arrays, encoder_arrays

    codec = build_huffman_decoder(
        HuffTable("dc", 0, T.STD_DC_LUMA_BITS, T.STD_DC_LUMA_VALS)
    )
    mn, mx, vp, vals = decoder_arrays([codec, codec])
    assert mn.shape == (2, 17) and vals.shape == (2, 256)
    codes, sizes = encoder_arrays([codec])
    assert codes.shape == (1, 256)
    assert int(sizes[0, 0]) > 0  # category 0 must be codable


def test_zigzag_tables_are_inverse_permutations():
    assert np.array_equal(
        T.ZIGZAG_INDEX[T.NATURAL_FROM_ZIGZAG], np.arange(64)
    )
    assert np.array_equal(
        T.NATURAL_FROM_ZIGZAG[T.ZIGZAG_INDEX], np.arange(64)
    )
