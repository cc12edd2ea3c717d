from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [Extension("pcfv._ckernels", ["src/pcfv/_ckernels.pyx"], language="c++",
                   extra_compile_args=["-O2"], optional=True)],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    )
except ImportError:  # no Cython: the pure-Python kernels are used
    ext_modules = []

setup(ext_modules=ext_modules)
