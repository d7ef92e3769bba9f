from setuptools import Extension, setup

# The enumeration kernel compiles to C when Cython is available; the package
# falls back to the pure-Python kernel at import time when it is not.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("aspcore2._kernel", ["src/aspcore2/_kernel.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
