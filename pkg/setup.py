from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "monoholo._kernels",
                ["src/monoholo/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-python fallback backend is selected at import when the
    # compiled kernel is absent.
    ext_modules = []

setup(ext_modules=ext_modules)
