import os

import numpy
from setuptools import Extension, setup

PYX = os.path.join("src", "steerkit", "_fastkern.pyx")

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None and os.path.exists(PYX):
    ext_modules = cythonize(
        [
            Extension(
                "steerkit._fastkern",
                [PYX],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
else:
    # No Cython: install the pure-Python backend only.
    ext_modules = []

setup(ext_modules=ext_modules)
