import os

from setuptools import Extension, setup

# -ffp-contract=off keeps the compiled kernel bit-identical to the pure
# Python backend (gcc contracts a*a+b*b into fma by default).
KERNEL_FLAGS = ["-O3", "-ffp-contract=off"]
KERNEL_PYX = "src/wakedep/engine/_kernel.pyx"

try:
    from Cython.Build import cythonize

    if not os.path.exists(KERNEL_PYX):
        raise ImportError("kernel source not present")
    extensions = cythonize(
        [
            Extension(
                "wakedep.engine._kernel",
                sources=[KERNEL_PYX],
                extra_compile_args=KERNEL_FLAGS,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-Python install still works; the engine falls back to the
    # reference backend at import time.
    extensions = []

setup(ext_modules=extensions)
