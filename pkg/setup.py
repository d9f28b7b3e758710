"""Build script for the optional compiled scan kernels.

The extension is optional: when Cython or a C compiler is missing the package
still installs and ``dioph._kernels`` falls back to the numpy implementation.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("DIOPH_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "dioph._kernels._scan",
                    ["src/dioph/_kernels/_scan.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # pragma: no cover - depends on toolchain
        print(f"dioph: building without compiled kernels ({exc})")
        ext_modules = []

setup(ext_modules=ext_modules)
