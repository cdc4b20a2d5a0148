"""Optional libjpeg-backed reference decoder (validation oracle).

Import-guarded: ``available()`` reports whether the wrapper extension was
built.  Used by the conformance tests and nowhere in the main pipeline.
"""

try:
    from . import _refjpeg
except ImportError:
    _refjpeg = None


def available() -> bool:
    return _refjpeg is not None


def read_coefficients(path):
    """(width, height, components) with quantized blocks and quant steps."""
    if _refjpeg is None:
        raise RuntimeError("reference decoder extension is not built")
    return _refjpeg.read_coefficients(path)


def decode_pixels(path, dct_method="float", fancy_upsampling=False,
                  color_space="rgb"):
    if _refjpeg is None:
        raise RuntimeError("reference decoder extension is not built")
    return _refjpeg.decode_pixels(
        path,
        dct_method=dct_method,
        fancy_upsampling=fancy_upsampling,
        color_space=color_space,
    )
