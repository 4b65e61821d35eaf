"""Build hook for the optional compiled kernels.

Without Cython (or a compiler) the package installs pure Python and
``rusforge._core`` falls back to ``_core_py``.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/rusforge/_core_c.pyx"],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        quiet=True,
    )
except Exception:  # pragma: no cover - build without Cython
    ext_modules = []

setup(ext_modules=ext_modules)
