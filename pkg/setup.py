import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SPERNER_EQ_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "sperner_eq._core",
                    ["src/sperner_eq/_core.pyx"],
                    # keep IEEE semantics: results must match the Python fallback bit for bit
                    extra_compile_args=["-O2", "-ffp-contract=off", "-fno-fast-math"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
