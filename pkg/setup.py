"""Build the optional compiled extensions.

Two extensions are attempted:

* ``jpegdct.codec._entropy`` -- Huffman entropy decode/encode hot loops.
* ``jpegdct._refjpeg``       -- thin libjpeg wrapper used as an independent
                                 conformance oracle (needs libjpeg headers).

Both are optional: the package falls back to pure-Python entropy kernels
when ``_entropy`` is missing, and the reference wrapper is only consumed
by validation tooling.  Set ``JPEGDCT_NO_EXT=1`` to skip compilation.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build what we can; a failed extension downgrades to the fallback."""

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001 - any toolchain failure
            print(f"WARNING: skipping optional extension {ext.name}: {exc}")


ext_modules = []
if not os.environ.get("JPEGDCT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
        print("WARNING: Cython not available, building pure-Python only")
    if cythonize is not None:
        directives = {
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        }
        ext_modules = cythonize(
            [
                Extension(
                    "jpegdct.codec._entropy",
                    ["src/jpegdct/codec/_entropy.pyx"],
                ),
                Extension(
                    "jpegdct._refjpeg",
                    ["src/jpegdct/_refjpeg.pyx"],
                    libraries=["jpeg"],
                ),
            ],
            compiler_directives=directives,
        )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
