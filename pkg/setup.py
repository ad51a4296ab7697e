import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("UNIFSEL_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "unifsel._kernels",
                    ["src/unifsel/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # numpy fallback in unifsel._kernels_py is selected at import
        ext_modules = []

setup(ext_modules=ext_modules)
