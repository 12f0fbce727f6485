"""Build script for the optional compiled lattice-sum kernel.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile is not fatal to the install.
"""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qelattice.kernels._kernels",
                ["src/qelattice/kernels/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
