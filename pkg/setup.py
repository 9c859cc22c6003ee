"""Build the optional compiled sampling kernels.

The package works without them; set QMETER_NO_EXT=1 to skip compilation.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("QMETER_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("qmeter._kernels", ["src/qmeter/_kernels.pyx"],
                       include_dirs=[np.get_include()],
                       define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
