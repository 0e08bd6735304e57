"""Builds the openconvoy._core extension straight from the C++ sources.

The CMake tree stays the primary build (library, CLI, tests); this setup only
exists so `pip install .` produces a wheel with the bound module inside the
package. Use `pip install -e . --no-build-isolation` for development installs.
"""

from glob import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "openconvoy._core",
    sorted(glob("src/*.cpp")) + ["bindings/py_module.cpp"],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(
    packages=["openconvoy"],
    package_dir={"": "python"},
    ext_modules=[ext],
    cmdclass={"build_ext": build_ext},
)
