"""Build the optional compiled kernels.

The package works without the extension (a pure-Python fallback is selected at
import time), so a missing compiler only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "tracekit._speedups",
                ["src/tracekit/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

for ext in ext_modules:
    ext.optional = True

setup(ext_modules=ext_modules)
