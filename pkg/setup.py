"""Build script: compiles the optional Cython term-arithmetic kernel.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time), so any build failure here degrades
to a warning instead of aborting the install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"skipping compiled kernel, using pure-Python fallback ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping {ext.name}, using pure-Python fallback ({exc})")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("superint._speedups", ["src/superint/_speedups.pyx"])],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
