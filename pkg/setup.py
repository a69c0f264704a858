"""Builds the optional compiled flow kernels; the package works without them."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("FO_NO_EXTENSION", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("furuta_ohta.csflow._kernels",
                       ["src/furuta_ohta/csflow/_kernels.pyx"],
                       include_dirs=[np.get_include()],
                       define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
            compiler_directives={"language_level": 3},
            quiet=True,
        )

setup(ext_modules=ext_modules)
