import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    import numpy as np
except ImportError:  # pure-Python install; bestpair falls back at import
    ext_modules = []
else:
    if os.environ.get("BESTPAIR_PORTABLE"):
        flags = ["-O3"]
    else:
        flags = ["-O3", "-march=native"]
    ext_modules = cythonize(
        [
            Extension(
                "bestpair._kernel",
                ["src/bestpair/_kernel.pyx"],
                include_dirs=[np.get_include(), "src/bestpair"],
                extra_compile_args=flags,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
