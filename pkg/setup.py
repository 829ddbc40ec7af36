import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("EMLAB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("emlab._kernels", ["src/emlab/_kernels.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
        for ext in ext_modules:
            # a missing compiler leaves the pure-Python kernels in charge
            ext.optional = True

setup(ext_modules=ext_modules)
