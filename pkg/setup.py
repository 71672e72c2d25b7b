from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # plain sdist consumers still get the pure-Python kernel
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("chernflow._elim", ["src/chernflow/_elim.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules)
