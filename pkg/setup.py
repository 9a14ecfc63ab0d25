"""Build script: compiles the embedding training kernel when Cython and a C
compiler are available.  The package installs and runs without the extension
(a numpy fallback kernel is selected at import time)."""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "latinlex.embeddings._sgns_cy",
                ["src/latinlex/embeddings/_sgns_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
