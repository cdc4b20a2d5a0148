"""JPEG partial decoding, DCT-domain tensors, and coefficient-fed CNNs."""

__version__ = "0.1.0"

from .codec import decode_coefficients, encode_jpeg, parse_jpeg  # noqa: F401
from .dctdomain import full_decode  # noqa: F401
