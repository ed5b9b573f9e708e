import os

import numpy
from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("VILENKIN_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension(
                "vilenkin._kernels",
                ["src/vilenkin/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )],
            language_level=3,
        )

setup(ext_modules=ext_modules)
