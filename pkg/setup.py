"""Build hook for the optional compiled kernels.

The package is fully functional without the extension (_kernels falls
back to the pure-Python twins), so the build degrades gracefully: no
Cython, or SUPERSLICE_NO_EXT=1, means no extension and no failure.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SUPERSLICE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("superslice._speedups",
                       ["src/superslice/_speedups.pyx"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
