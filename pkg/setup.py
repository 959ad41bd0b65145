import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "pachlab._kernels",
                ["src/pachlab/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
    # the package is fully functional without the extension
    for ext in ext_modules:
        ext.optional = True
else:
    ext_modules = []

setup(ext_modules=ext_modules)
