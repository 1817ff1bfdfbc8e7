from Cython.Build import cythonize
from setuptools import Extension, setup
import numpy as np

ext = Extension(
    "semcodec._speedups",
    ["src/semcodec/_speedups.pyx"],
    include_dirs=[np.get_include()],
)

setup(ext_modules=cythonize(ext, language_level=3))
