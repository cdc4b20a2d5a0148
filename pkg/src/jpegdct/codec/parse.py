"""Marker-level parsing of baseline JFIF streams.

Parsing stops at the structural level: headers and tables are decoded, the
entropy-coded payload is captured verbatim (byte stuffing and restart
markers intact) so the partial-decode stage can run later, lazily.
"""

import numpy as np

from .errors import (
    BadTableSlot,
    MissingSOI,
    TruncatedStream,
    UnsupportedMarker,
)
from .types import (
    Component,
    CompressedImage,
    FrameInfo,
    HuffTable,
    QuantTable,
    ScanComponent,
)

# Marker bytes (second byte after 0xFF).
SOI = 0xD8
EOI = 0xD9
SOS = 0xDA
DQT = 0xDB
DNL = 0xDC
DRI = 0xDD
DHT = 0xC4
DAC = 0xCC
COM = 0xFE
SOF0 = 0xC0
SOF1 = 0xC1
TEM = 0x01

_SOF_REJECT = {
    0xC2: "progressive DCT",
    0xC3: "lossless sequential",
    0xC5: "differential sequential",
    0xC6: "differential progressive",
    0xC7: "differential lossless",
    0xC9: "arithmetic sequential",
    0xCA: "arithmetic progressive",
    0xCB: "arithmetic lossless",
    0xCD: "differential arithmetic sequential",
    0xCE: "differential arithmetic progressive",
    0xCF: "differential arithmetic lossless",
}


def _u16(data, pos):
    if pos + 2 > len(data):
        raise TruncatedStream("stream ended inside a length field")
    return (data[pos] << 8) | data[pos + 1]


def _parse_dqt(payload, quant_tables):
    i = 0
    while i < len(payload):
        pq = payload[i] >> 4
        tq = payload[i] & 0x0F
        i += 1
        if pq == 1:
            raise UnsupportedMarker("16-bit quantization tables")
        if pq != 0:
            raise BadTableSlot(f"quantization precision {pq}")
        if i + 64 > len(payload):
            raise TruncatedStream("DQT segment shorter than 64 steps")
        steps = np.frombuffer(payload[i : i + 64], dtype=np.uint8)
        if steps.min() == 0:
            raise BadTableSlot("quantization step of 0")
        quant_tables[tq] = QuantTable(tq, steps.astype(np.int32))
        i += 64


def _parse_dht(payload, dc_tables, ac_tables):
    i = 0
    while i < len(payload):
        tc = payload[i] >> 4
        th = payload[i] & 0x0F
        i += 1
        if tc > 1:
            raise BadTableSlot(f"huffman table class {tc}")
        if i + 16 > len(payload):
            raise TruncatedStream("DHT segment shorter than 16 counts")
        bits = tuple(payload[i : i + 16])
        i += 16
        n = sum(bits)
        if i + n > len(payload):
            raise TruncatedStream("DHT segment shorter than its value list")
        vals = tuple(payload[i : i + n])
        i += n
        table = HuffTable("dc" if tc == 0 else "ac", th, bits, vals)
        (dc_tables if tc == 0 else ac_tables)[th] = table


def _parse_sof(payload):
    if len(payload) < 6:
        raise TruncatedStream("SOF segment too short")
    precision = payload[0]
    if precision != 8:
        raise UnsupportedMarker(f"{precision}-bit sample precision")
    height = (payload[1] << 8) | payload[2]
    width = (payload[3] << 8) | payload[4]
    ncomp = payload[5]
    if not 1 <= ncomp <= 4:
        raise UnsupportedMarker(f"{ncomp} frame components")
    if height == 0 or width == 0:
        raise UnsupportedMarker("zero frame dimension (DNL not supported)")
    if len(payload) < 6 + 3 * ncomp:
        raise TruncatedStream("SOF component list truncated")
    comps = []
    for c in range(ncomp):
        cid = payload[6 + 3 * c]
        hv = payload[7 + 3 * c]
        tq = payload[8 + 3 * c]
        h, v = hv >> 4, hv & 0x0F
        if not (1 <= h <= 4 and 1 <= v <= 4):
            raise UnsupportedMarker(f"sampling factors {h}x{v}")
        if tq > 3:
            raise BadTableSlot(f"quantization table slot {tq}")
        comps.append(Component(cid, h, v, tq))
    return FrameInfo(width, height, precision, tuple(comps))


def _parse_sos_header(payload, frame):
    if frame is None:
        raise UnsupportedMarker("scan before frame header")
    if len(payload) < 1:
        raise TruncatedStream("SOS segment too short")
    ns = payload[0]
    if ns != len(frame.components):
        raise UnsupportedMarker(
            f"scan with {ns} of {len(frame.components)} components "
            "(multi-scan streams not supported)"
        )
    if len(payload) < 1 + 2 * ns + 3:
        raise TruncatedStream("SOS component list truncated")
    by_id = {c.component_id: c for c in frame.components}
    scan = []
    for i in range(ns):
        cs = payload[1 + 2 * i]
        tdta = payload[2 + 2 * i]
        if cs not in by_id:
            raise UnsupportedMarker(f"scan references unknown component {cs}")
        scan.append(ScanComponent(cs, tdta >> 4, tdta & 0x0F))
    ss, se, ahal = payload[1 + 2 * ns : 4 + 2 * ns]
    if (ss, se, ahal) != (0, 63, 0):
        raise UnsupportedMarker(
            f"spectral selection {ss}..{se}/{ahal:#04x} "
            "(baseline requires 0..63/0)"
        )
    return tuple(scan)


def _capture_entropy_data(data, pos):
    """Scan forward to EOI, keeping stuffed bytes and RSTn markers."""
    start = pos
    i = pos
    n = len(data)
    while True:
        j = data.find(b"\xFF", i)
        if j < 0 or j + 1 >= n:
            raise TruncatedStream("scan data ended without EOI")
        m = data[j + 1]
        if m == 0x00 or 0xD0 <= m <= 0xD7:
            i = j + 2  # stuffed byte or restart marker: entropy data
            continue
        if m == 0xFF:
            i = j + 1  # fill byte before a marker
            continue
        if m == EOI:
            return data[start:j], j + 2
        if m == DNL:
            raise UnsupportedMarker("DNL segment")
        if m == SOS:
            raise UnsupportedMarker("multiple scans")
        raise UnsupportedMarker(f"marker 0xFF{m:02X} inside scan data")


def parse_jpeg(data: bytes) -> CompressedImage:
    """Parse a baseline JFIF stream down to its entropy-coded payload."""
    data = bytes(data)
    if len(data) < 2 or data[0] != 0xFF or data[1] != SOI:
        raise MissingSOI("input does not start with an SOI marker")

    quant_tables, dc_tables, ac_tables = {}, {}, {}
    restart_interval = 0
    frame = None
    pos = 2

    while True:
        # Fill bytes (repeated 0xFF) are allowed before any marker.
        while pos < len(data) and data[pos] == 0xFF and \
                pos + 1 < len(data) and data[pos + 1] == 0xFF:
            pos += 1
        if pos + 2 > len(data):
            raise TruncatedStream("stream ended while expecting a marker")
        if data[pos] != 0xFF:
            raise TruncatedStream(
                f"expected a marker at offset {pos}, "
                f"found byte {data[pos]:#04x}"
            )
        marker = data[pos + 1]
        pos += 2

        if marker == EOI:
            raise TruncatedStream("EOI before any scan data")
        if marker == SOI:
            raise UnsupportedMarker("nested SOI marker")
        if marker == TEM or 0xD0 <= marker <= 0xD7:
            raise UnsupportedMarker(
                f"standalone marker 0xFF{marker:02X} outside scan data"
            )
        if marker in _SOF_REJECT:
            raise UnsupportedMarker(_SOF_REJECT[marker])
        if marker == DAC:
            raise UnsupportedMarker("arithmetic conditioning table")

        seg_len = _u16(data, pos)
        if seg_len < 2 or pos + seg_len > len(data):
            raise TruncatedStream("segment length exceeds remaining stream")
        payload = data[pos + 2 : pos + seg_len]
        pos += seg_len

        if 0xE0 <= marker <= 0xEF or marker == COM:
            continue  # APPn / COM: skipped
        if marker == DQT:
            _parse_dqt(payload, quant_tables)
        elif marker == DHT:
            _parse_dht(payload, dc_tables, ac_tables)
        elif marker == DRI:
            if len(payload) < 2:
                raise TruncatedStream("DRI segment too short")
            restart_interval = (payload[0] << 8) | payload[1]
        elif marker in (SOF0, SOF1):
            if frame is not None:
                raise UnsupportedMarker("second frame header")
            frame = _parse_sof(payload)
        elif marker == SOS:
            scan = _parse_sos_header(payload, frame)
            entropy_data, pos = _capture_entropy_data(data, pos)
            break
        else:
            raise UnsupportedMarker(f"marker 0xFF{marker:02X}")

    if not entropy_data:
        raise TruncatedStream("empty entropy-coded payload")
    for comp in frame.components:
        if comp.quant_id not in quant_tables:
            raise BadTableSlot(
                f"component {comp.component_id} references undefined "
                f"quantization table {comp.quant_id}"
            )
    for sc in scan:
        if sc.dc_id not in dc_tables:
            raise BadTableSlot(f"undefined DC table {sc.dc_id}")
        if sc.ac_id not in ac_tables:
            raise BadTableSlot(f"undefined AC table {sc.ac_id}")

    return CompressedImage(
        frame=frame,
        quant_tables=quant_tables,
        dc_tables=dc_tables,
        ac_tables=ac_tables,
        restart_interval=restart_interval,
        scan=scan,
        entropy_data=entropy_data,
    )
