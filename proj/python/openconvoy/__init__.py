"""Cooperative-driving platooning simulator: python bindings.

The heavy lifting lives in the compiled ``_core`` module; this package
re-exports its public surface. ``_core`` sits inside the package in wheel
builds and next to it on ``PYTHONPATH`` when running against an in-tree
CMake build.
"""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # in-tree build: _core.so on PYTHONPATH, not in the package
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
