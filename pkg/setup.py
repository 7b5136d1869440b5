from setuptools import Extension, setup
from Cython.Build import cythonize

ext_modules = [
    Extension(
        "quadric_landau._core",
        ["src/quadric_landau/_core.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(ext_modules=cythonize(ext_modules, language_level="3"))
