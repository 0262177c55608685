from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "trajmine._distkernels",
                ["src/trajmine/_distkernels.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    # No Cython: install with the pure-NumPy kernel backend only.
    extensions = []

setup(ext_modules=extensions)
