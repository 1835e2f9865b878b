"""Build script: compiles the optional accelerator extension when possible.

The package is pure Python plus one optional Cython module
(``cfaccel._kernels``).  If Cython or a C toolchain is missing, or the
extension fails to build, installation still succeeds and the library
falls back to ``cfaccel._kernels_py`` at import time.

Set CFACCEL_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class _OptionalBuildExt(build_ext):
    """build_ext that downgrades compile failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing, etc.
            print(f"warning: skipping optional extension build ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "the pure-Python kernels will be used")


def _extensions():
    if os.environ.get("CFACCEL_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "cfaccel._kernels",
        ["src/cfaccel/_kernels.pyx"],
        extra_compile_args=["-O2"],
    )
    return cythonize([ext], language_level="3")


setup(
    ext_modules=_extensions(),
    cmdclass={"build_ext": _OptionalBuildExt},
)
