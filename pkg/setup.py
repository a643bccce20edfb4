import os

from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the pure-Python
# twin in upblab._kernels.reference when the extension is absent.  Set
# UPBLAB_NO_EXT=1 to skip compilation entirely.
ext_modules = []
if os.environ.get("UPBLAB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("upblab._kernels._fast", ["src/upblab/_kernels/_fast.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # pragma: no cover - build-environment dependent
        print(f"warning: building without compiled kernels ({exc})")
        ext_modules = []

setup(ext_modules=ext_modules)
