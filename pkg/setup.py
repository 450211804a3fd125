"""Build script: compiles the optional C speedup kernel.

The package works without the extension (a pure NumPy fallback is selected
at import time), so any failure to compile is downgraded to a warning.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that tolerates a missing compiler or Cython toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            warnings.warn(f"skipping compiled kernels ({exc}); "
                          "chanceknap will use the pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"failed to build {ext.name} ({exc}); "
                          "chanceknap will use the pure-Python fallback")


def make_extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        warnings.warn(f"Cython/NumPy unavailable ({exc}); building without "
                      "compiled kernels")
        return []
    ext = Extension(
        "chanceknap._speedups",
        sources=["src/chanceknap/_speedups.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=make_extensions(), cmdclass={"build_ext": OptionalBuildExt})
