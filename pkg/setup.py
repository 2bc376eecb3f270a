from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("implicit_lce._ckernels", ["src/implicit_lce/_ckernels.pyx"])],
        language_level="3",
    )
except ImportError:
    # Pure-Python fallback kernels are used when the extension is unavailable.
    ext_modules = []

setup(ext_modules=ext_modules)
