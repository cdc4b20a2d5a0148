"""Typed errors raised by the JPEG parser, entropy coder, and encoder."""


class JpegError(Exception):
    """Base class for all codec errors."""


class MissingSOI(JpegError):
    """Input does not start with the SOI marker."""


class UnsupportedMarker(JpegError):
    """Stream uses a feature outside baseline sequential Huffman JPEG."""


class TruncatedStream(JpegError):
    """Stream ended before the expected structure was complete."""


class BadTableSlot(JpegError):
    """Table definition or reference uses an invalid or unresolved slot."""


class OverfullCodeSpace(JpegError):
    """Huffman length counts exceed the available canonical code space."""


class BitstreamExhausted(JpegError):
    """Entropy data ran out while coefficients were still expected."""


class InvalidHuffmanCode(JpegError):
    """A code with no assigned symbol (or an illegal run) was decoded."""


class BadRestartMarker(JpegError):
    """Expected RSTn marker missing or out of sequence."""


class DimensionMismatch(JpegError):
    """Supplied component planes disagree with the subsampling layout."""


class SampleOutOfRange(JpegError):
    """Pixel samples outside the 8-bit range were passed to the encoder."""
