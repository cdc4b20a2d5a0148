"""Entropy-kernel backend selection.

The compiled extension is preferred when importable; the pure-Python module
is the fallback.  ``JPEGDCT_PURE=1`` forces the fallback (useful for
debugging and for benchmarking the two side by side).
"""

import os

from . import entropy_py

try:
    from . import _entropy
except ImportError:  # extension not built
    _entropy = None

_FORCE_PURE = bool(os.environ.get("JPEGDCT_PURE"))


def compiled_available() -> bool:
    return _entropy is not None


def active_backend():
    """Module providing decode_scan/encode_scan, per current selection."""
    if _entropy is not None and not _FORCE_PURE:
        return _entropy
    return entropy_py


def get_backend(name=None):
    """Resolve a backend by name: None (active), "compiled", or "pure"."""
    if name is None:
        return active_backend()
    if name == "pure":
        return entropy_py
    if name == "compiled":
        if _entropy is None:
            raise RuntimeError("compiled entropy backend is not built")
        return _entropy
    raise ValueError(f"unknown backend {name!r}")


def backend_name() -> str:
    return active_backend().BACKEND_NAME
