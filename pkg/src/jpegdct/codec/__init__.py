"""Baseline JPEG codec with a partial-decode exit.

The decode path stops after entropy decoding and hands back quantized DCT
coefficient grids; full pixel reconstruction lives in ``jpegdct.dctdomain``.
"""

from .backend import backend_name, compiled_available, get_backend
from .decode import decode_coefficients, scan_geometry
from .encode import (
    dct_matrix,
    encode_jpeg,
    fdct_blocks,
    forward_coefficients,
    standard_tables,
    unit_tables,
)
from .errors import (
    BadRestartMarker,
    BadTableSlot,
    BitstreamExhausted,
    DimensionMismatch,
    InvalidHuffmanCode,
    JpegError,
    MissingSOI,
    OverfullCodeSpace,
    SampleOutOfRange,
    TruncatedStream,
    UnsupportedMarker,
)
from .huffman import HuffmanCodec, build_huffman_decoder, build_huffman_encoder
from .parse import parse_jpeg
from .types import (
    CoefficientGrid,
    Component,
    CompressedImage,
    FrameInfo,
    HuffTable,
    QuantTable,
    ScanComponent,
)

__all__ = [
    "BadRestartMarker",
    "BadTableSlot",
    "BitstreamExhausted",
    "CoefficientGrid",
    "Component",
    "CompressedImage",
    "DimensionMismatch",
    "FrameInfo",
    "HuffTable",
    "HuffmanCodec",
    "InvalidHuffmanCode",
    "JpegError",
    "MissingSOI",
    "OverfullCodeSpace",
    "QuantTable",
    "SampleOutOfRange",
    "ScanComponent",
    "TruncatedStream",
    "UnsupportedMarker",
    "backend_name",
    "build_huffman_decoder",
    "build_huffman_encoder",
    "compiled_available",
    "dct_matrix",
    "decode_coefficients",
    "encode_jpeg",
    "fdct_blocks",
    "forward_coefficients",
    "get_backend",
    "parse_jpeg",
    "scan_geometry",
    "standard_tables",
    "unit_tables",
]
