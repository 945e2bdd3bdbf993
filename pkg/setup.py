"""Build script for the optional compiled split-search kernel.

The package works without the extension (a numpy fallback is selected at
import time), so a missing Cython or compiler only costs speed.
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "paydev.ml._split_cy",
                ["src/paydev/ml/_split_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # no -march/-ffast-math: the kernel must match the numpy
                # fallback bit-for-bit (no FMA contraction, strict IEEE)
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
