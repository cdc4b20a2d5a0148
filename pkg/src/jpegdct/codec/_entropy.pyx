# cython: language_level=3
"""Compiled entropy kernels: Huffman scan decode and encode.

Mirrors ``entropy_py`` exactly; see that module for the interface contract.
"""

from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memset

import numpy as np

from jpegdct.codec.errors import (
    BadRestartMarker,
    BitstreamExhausted,
    InvalidHuffmanCode,
)
from jpegdct.codec.tables import NATURAL_FROM_ZIGZAG

BACKEND_NAME = "compiled"

cdef int[64] NAT_FROM_ZZ
for _k in range(64):
    NAT_FROM_ZZ[_k] = NATURAL_FROM_ZIGZAG[_k]

# _next_bits return codes below zero
DEF ERR_EXHAUSTED = -1
DEF ERR_MARKER = -2
DEF ERR_BADCODE = -3


cdef inline int _next_bits(const unsigned char *d, Py_ssize_t n,
                           Py_ssize_t *pos, unsigned int *buf, int *cnt,
                           int nbits) noexcept nogil:
    cdef unsigned int b, b2
    while cnt[0] < nbits:
        if pos[0] >= n:
            return ERR_EXHAUSTED
        b = d[pos[0]]
        pos[0] += 1
        if b == 0xFF:
            if pos[0] >= n:
                return ERR_EXHAUSTED
            b2 = d[pos[0]]
            if b2 == 0x00:
                pos[0] += 1
            else:
                pos[0] -= 1
                return ERR_MARKER
        buf[0] = (buf[0] << 8) | b
        cnt[0] += 8
    cnt[0] -= nbits
    return <int> ((buf[0] >> cnt[0]) & ((1u << nbits) - 1u))


cdef inline int _decode_symbol(const unsigned char *d, Py_ssize_t n,
                               Py_ssize_t *pos, unsigned int *buf, int *cnt,
                               const int *mincode, const int *maxcode,
                               const int *valptr,
                               const unsigned char *values) noexcept nogil:
    cdef int code, length, bit
    code = _next_bits(d, n, pos, buf, cnt, 1)
    if code < 0:
        return code
    length = 1
    while code > maxcode[length]:
        length += 1
        if length > 16:
            return ERR_BADCODE
        bit = _next_bits(d, n, pos, buf, cnt, 1)
        if bit < 0:
            return bit
        code = (code << 1) | bit
    return values[valptr[length] + code - mincode[length]]


cdef inline int _extend(int value, int size) noexcept nogil:
    if value < (1 << (size - 1)):
        return value - (1 << size) + 1
    return value


cdef void _raise_decode(int err):
    if err == ERR_EXHAUSTED:
        raise BitstreamExhausted("entropy data ended mid-block")
    if err == ERR_MARKER:
        raise BitstreamExhausted(
            "marker encountered inside entropy-coded data"
        )
    raise InvalidHuffmanCode("code longer than 16 bits")


def decode_scan(const unsigned char[::1] data,
                const int[::1] comp_h, const int[::1] comp_v,
                const int[::1] comp_bw, const int[::1] comp_bh,
                const int[::1] comp_dc, const int[::1] comp_ac,
                const int[:, ::1] dc_min, const int[:, ::1] dc_max,
                const int[:, ::1] dc_valptr,
                const unsigned char[:, ::1] dc_vals,
                const int[:, ::1] ac_min, const int[:, ::1] ac_max,
                const int[:, ::1] ac_valptr,
                const unsigned char[:, ::1] ac_vals,
                int mcus_x, int mcus_y, int restart_interval,
                int[:, ::1] out):
    cdef Py_ssize_t pos = 0
    cdef Py_ssize_t n = data.shape[0]
    cdef const unsigned char *d = &data[0]
    cdef unsigned int buf = 0
    cdef int cnt = 0
    cdef int nc = <int> comp_h.shape[0]
    cdef int[4] preds, offs
    cdef int c, acc = 0, rst_m = 0
    cdef int mcu_x, mcu_y, vy, hx, t, rs, r, s, k, val
    cdef long mcu_index = 0
    cdef int dci, aci, bw
    cdef int *row
    cdef unsigned char b0, b1

    for c in range(nc):
        offs[c] = acc
        acc += comp_bw[c] * comp_bh[c]
        preds[c] = 0

    for mcu_y in range(mcus_y):
        for mcu_x in range(mcus_x):
            if restart_interval and mcu_index != 0 and \
                    mcu_index % restart_interval == 0:
                cnt = 0
                if pos + 2 > n:
                    raise BadRestartMarker(
                        "scan ended where RST marker expected"
                    )
                b0 = d[pos]
                b1 = d[pos + 1]
                if b0 != 0xFF or b1 != (0xD0 | rst_m):
                    raise BadRestartMarker(
                        f"expected RST{rst_m}, found bytes "
                        f"{b0:#04x} {b1:#04x}"
                    )
                pos += 2
                rst_m = (rst_m + 1) & 7
                for c in range(nc):
                    preds[c] = 0
            for c in range(nc):
                dci = comp_dc[c]
                aci = comp_ac[c]
                bw = comp_bw[c]
                for vy in range(comp_v[c]):
                    for hx in range(comp_h[c]):
                        row = &out[
                            offs[c]
                            + (mcu_y * comp_v[c] + vy) * bw
                            + (mcu_x * comp_h[c] + hx),
                            0,
                        ]
                        t = _decode_symbol(
                            d, n, &pos, &buf, &cnt,
                            &dc_min[dci, 0], &dc_max[dci, 0],
                            &dc_valptr[dci, 0], &dc_vals[dci, 0])
                        if t < 0:
                            _raise_decode(t)
                        if t > 15:
                            raise InvalidHuffmanCode(
                                f"DC magnitude category {t}"
                            )
                        if t:
                            val = _next_bits(d, n, &pos, &buf, &cnt, t)
                            if val < 0:
                                _raise_decode(val)
                            preds[c] += _extend(val, t)
                        row[0] = preds[c]
                        k = 1
                        while k < 64:
                            rs = _decode_symbol(
                                d, n, &pos, &buf, &cnt,
                                &ac_min[aci, 0], &ac_max[aci, 0],
                                &ac_valptr[aci, 0], &ac_vals[aci, 0])
                            if rs < 0:
                                _raise_decode(rs)
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
                            val = _next_bits(d, n, &pos, &buf, &cnt, s)
                            if val < 0:
                                _raise_decode(val)
                            row[NAT_FROM_ZZ[k]] = _extend(val, s)
                            k += 1
            mcu_index += 1


cdef struct _Writer:
    unsigned char *buf
    Py_ssize_t len
    Py_ssize_t cap
    unsigned int acc
    int cnt


cdef inline int _w_raw(_Writer *w, unsigned char byte) noexcept nogil:
    # unescaped byte (marker emission)
    cdef unsigned char *nbuf
    if w.len + 1 > w.cap:
        w.cap *= 2
        nbuf = <unsigned char *> realloc(w.buf, w.cap)
        if nbuf == NULL:
            return -1
        w.buf = nbuf
    w.buf[w.len] = byte
    w.len += 1
    return 0


cdef inline int _w_byte(_Writer *w, unsigned char byte) noexcept nogil:
    # entropy byte with 0xFF stuffing
    if _w_raw(w, byte) < 0:
        return -1
    if byte == 0xFF:
        return _w_raw(w, 0x00)
    return 0


cdef inline int _w_put(_Writer *w, unsigned int code, int size) noexcept nogil:
    if size == 0:
        return 0
    w.acc = (w.acc << size) | (code & ((1u << size) - 1u))
    w.cnt += size
    while w.cnt >= 8:
        w.cnt -= 8
        if _w_byte(w, <unsigned char> ((w.acc >> w.cnt) & 0xFFu)) < 0:
            return -1
    w.acc &= (1u << w.cnt) - 1u
    return 0


cdef inline int _w_flush(_Writer *w) noexcept nogil:
    cdef int pad
    if w.cnt:
        pad = 8 - w.cnt
        return _w_put(w, (1u << pad) - 1u, pad)
    return 0


cdef inline int _cat(int v) noexcept nogil:
    cdef unsigned int a = <unsigned int> (v if v >= 0 else -v)
    cdef int s = 0
    while a:
        s += 1
        a >>= 1
    return s


def encode_scan(const int[::1] comp_h, const int[::1] comp_v,
                const int[::1] comp_bw, const int[::1] comp_bh,
                const int[::1] comp_dc, const int[::1] comp_ac,
                const int[:, ::1] dc_codes,
                const unsigned char[:, ::1] dc_sizes,
                const int[:, ::1] ac_codes,
                const unsigned char[:, ::1] ac_sizes,
                const int[:, ::1] blocks,
                int mcus_x, int mcus_y, int restart_interval):
    cdef int nc = <int> comp_h.shape[0]
    cdef int[4] preds, offs
    cdef int c, acc = 0, rst_m = 0
    cdef int mcu_x, mcu_y, vy, hx, dc, diff, t, run, k, v, s, sym
    cdef long total_mcus = <long> mcus_x * mcus_y
    cdef long mcu_index = 0
    cdef int dci, aci, bw
    cdef const int *row
    cdef _Writer w
    cdef int fail = 0
    cdef object result

    for c in range(nc):
        offs[c] = acc
        acc += comp_bw[c] * comp_bh[c]
        preds[c] = 0

    w.cap = 1 << 14
    w.len = 0
    w.acc = 0
    w.cnt = 0
    w.buf = <unsigned char *> malloc(w.cap)
    if w.buf == NULL:
        raise MemoryError()

    try:
        for mcu_y in range(mcus_y):
            for mcu_x in range(mcus_x):
                for c in range(nc):
                    dci = comp_dc[c]
                    aci = comp_ac[c]
                    bw = comp_bw[c]
                    for vy in range(comp_v[c]):
                        for hx in range(comp_h[c]):
                            row = &blocks[
                                offs[c]
                                + (mcu_y * comp_v[c] + vy) * bw
                                + (mcu_x * comp_h[c] + hx),
                                0,
                            ]
                            dc = row[0]
                            diff = dc - preds[c]
                            preds[c] = dc
                            t = _cat(diff)
                            if dc_sizes[dci, t] == 0:
                                raise InvalidHuffmanCode(
                                    f"DC category {t} missing from table"
                                )
                            fail |= _w_put(&w, <unsigned int> dc_codes[dci, t],
                                           dc_sizes[dci, t])
                            if t:
                                fail |= _w_put(
                                    &w,
                                    <unsigned int> (diff if diff >= 0
                                                    else diff + (1 << t) - 1),
                                    t)
                            run = 0
                            for k in range(1, 64):
                                v = row[NAT_FROM_ZZ[k]]
                                if v == 0:
                                    run += 1
                                    continue
                                while run > 15:
                                    fail |= _w_put(
                                        &w,
                                        <unsigned int> ac_codes[aci, 0xF0],
                                        ac_sizes[aci, 0xF0])
                                    run -= 16
                                s = _cat(v)
                                sym = (run << 4) | s
                                if ac_sizes[aci, sym] == 0:
                                    raise InvalidHuffmanCode(
                                        f"AC symbol {sym:#04x} missing "
                                        f"from table"
                                    )
                                fail |= _w_put(
                                    &w, <unsigned int> ac_codes[aci, sym],
                                    ac_sizes[aci, sym])
                                fail |= _w_put(
                                    &w,
                                    <unsigned int> (v if v >= 0
                                                    else v + (1 << s) - 1),
                                    s)
                                run = 0
                            if run:
                                fail |= _w_put(
                                    &w, <unsigned int> ac_codes[aci, 0x00],
                                    ac_sizes[aci, 0x00])
                mcu_index += 1
                if restart_interval and \
                        mcu_index % restart_interval == 0 and \
                        mcu_index < total_mcus:
                    fail |= _w_flush(&w)
                    fail |= _w_raw(&w, 0xFF)
                    fail |= _w_raw(&w, <unsigned char> (0xD0 | rst_m))
                    rst_m = (rst_m + 1) & 7
                    for c in range(nc):
                        preds[c] = 0
        fail |= _w_flush(&w)
        if fail:
            raise MemoryError()
        result = bytes(w.buf[:w.len])
    finally:
        free(w.buf)
    return result
