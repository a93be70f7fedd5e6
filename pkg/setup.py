import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: ship the numpy fallback only
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "lengthlab._kernels",
                ["src/lengthlab/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
