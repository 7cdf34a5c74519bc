import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("RACETRACK_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        import numpy
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "racetrack._ckernel",
                    ["src/racetrack/_ckernel.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
