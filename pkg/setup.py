import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("LORENTZBH_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:  # build without the compiled core
        cythonize = None
    if cythonize is not None:
        extensions = [
            Extension(
                "lorentzbh._kernels",
                ["src/lorentzbh/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ]
        ext_modules = cythonize(
            extensions,
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)
