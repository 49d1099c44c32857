"""Build script.

The only compiled piece is the short-vector enumeration kernel.  It is
optional: if Cython (or a C compiler) is missing the package installs
anyway and latk.roots falls back to the pure-Python kernel at import.
"""

import os

from setuptools import Extension, setup

ext_modules = []
try:
    if not os.path.exists("src/latk/_enumcore.pyx"):
        raise ImportError
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "latk._enumcore",
                ["src/latk/_enumcore.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
