"""Kernel selection: the compiled module when importable, else pure Python.

Set ``EMLAB_PURE=1`` to force the pure-Python kernels.
"""

import os

from . import _pykernels

if os.environ.get("EMLAB_PURE") == "1":
    kernels = _pykernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _pykernels

BACKEND = kernels.BACKEND

# Kernel integers are 64-bit; larger values take the Python path.
_WIDE = 1 << 62


def available():
    """All importable kernel modules, for cross-checking and benchmarks."""
    mods = [_pykernels]
    try:
        from . import _kernels

        mods.append(_kernels)
    except ImportError:
        pass
    return mods


def for_values(*values):
    """The active kernels, or the Python ones if any value is too wide."""
    if kernels is _pykernels:
        return kernels
    for v in values:
        if v >= _WIDE:
            return _pykernels
    return kernels
