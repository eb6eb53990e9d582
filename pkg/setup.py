from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; the fallback kernels are used
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "skellam_odds._kernels",
                ["src/skellam_odds/_kernels.pyx"],
                # bitwise parity with the Python fallback needs unfused multiply-add
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
