from setuptools import Extension, setup

# The compiled census kernel is optional: the package falls back to the pure
# Python implementation in twoaction._census_py if the extension is absent.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("twoaction._census_cy", ["src/twoaction/_census_cy.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
