"""Build script: compiles the Cython stepping kernel when Cython and a C
compiler are available.  The package works without it (a pure-Python twin of
the kernel is selected at import time), so failures here only cost speed.

Set CROSSKERR_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CROSSKERR_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "crosskerr.kernels._stepper_cy",
                    ["src/crosskerr/kernels/_stepper_cy.pyx"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
