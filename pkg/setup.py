import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "wgapdc._jsa_kernel",
                ["src/wgapdc/_jsa_kernel.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Without Cython the package falls back to the NumPy kernel at import.
    ext_modules = []

setup(ext_modules=ext_modules)
