import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SEQDISC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # fall back to the pure-Python kernels
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "seqdisc._kernels._core",
                    ["src/seqdisc/_kernels/_core.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
