"""Build hook for the optional compiled kernel backend.

The package is pure Python plus one Cython extension holding the hot
sampling loops.  The extension is a performance backend only: if Cython
or a C compiler is unavailable the build degrades to the numpy fallback
in ``levywalk.kernels._pykernels`` and everything still works, so any
failure while compiling is reported as a warning rather than an error.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that downgrades compilation failures to warnings."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing entirely
            warnings.warn(f"skipping compiled kernels ({exc}); "
                          f"falling back to the pure-Python backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"failed to build {ext.name} ({exc}); "
                          f"falling back to the pure-Python backend")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        warnings.warn(f"Cython/numpy unavailable at build time ({exc}); "
                      f"building without compiled kernels")
        return []
    ext = Extension(
        "levywalk.kernels._ckernels",
        sources=["src/levywalk/kernels/_ckernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
