from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernels are an optional accelerator; the package falls back to
# the pure-Python twins in pstseq._pykernels when the extension is absent.
ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "pstseq._speedups",
                ["src/pstseq/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
