"""Build script: compiles the optional Cython cycle-loop kernel.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time), so any failure here downgrades to
a pure build instead of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import os

    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    # The binomial sampler comes from numpy's static npyrandom library.
    npyrandom_dir = os.path.join(os.path.dirname(numpy.random.__file__), "lib")

    ext_modules = cythonize(
        [
            Extension(
                "driftqec._kernels._core",
                ["src/driftqec/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                library_dirs=[npyrandom_dir],
                libraries=["npyrandom"],
                # fp-contract off: the kernel must stay bit-identical to the
                # pure-Python fallback, so no fused multiply-adds.
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    print(f"driftqec: skipping compiled kernel ({exc}); pure-Python fallback will be used",
          file=sys.stderr)

setup(ext_modules=ext_modules)
