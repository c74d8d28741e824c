"""Build the optional compiled kernels; the package falls back to pure Python
when Cython or a C compiler is unavailable."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(["src/divpow/_kernels.pyx"], language_level=3, quiet=True)
except Exception as exc:  # noqa: BLE001 - any failure means a pure-Python build
    print(f"divpow: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
