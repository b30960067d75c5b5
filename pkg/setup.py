"""Build the optional Cython kernel.

A failed compile is not fatal: the package falls back to the numpy
implementation in ``finsler_polydisc._kernels._pykernels``.
"""
import sys

import numpy as np
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain specific
            print(f"warning: Cython kernel not built ({exc}); using numpy fallback", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"warning: failed to build {ext.name} ({exc})", file=sys.stderr)


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "finsler_polydisc._kernels._ckernels",
                ["src/finsler_polydisc/_kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
except ImportError:  # pragma: no cover
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
