"""Build script. The compiled kernel module is optional: when Cython is not
available (or the toolchain fails) the package falls back to the numpy
implementations in sievelab._kernels_py at import time."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/sievelab/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # noqa: BLE001 - any build problem means "no extension"
    print(f"sievelab: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
