"""Builds the optional compiled kernel; the package falls back to numpy if absent."""

from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension("cartoon25d._kernels", ["src/cartoon25d/_kernels.pyx"]),
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    ),
)
