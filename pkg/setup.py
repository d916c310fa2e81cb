"""Build script: compiles the optional Cython kernel.

The extension is marked optional; if Cython or a C compiler is missing the
install still succeeds and the package falls back to the pure-Python kernel.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "olgbubbles._speedups",
                ["src/olgbubbles/_speedups.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
