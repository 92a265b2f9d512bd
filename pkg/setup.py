import os

from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to a numpy
# implementation when the extension is absent (see coniveau._kernels).
ext_modules = []
if os.environ.get("CONIVEAU_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "coniveau._kernels._gfcore",
                    ["src/coniveau/_kernels/_gfcore.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
