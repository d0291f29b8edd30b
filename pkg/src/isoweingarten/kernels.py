"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting the environment
variable ``ISOWEINGARTEN_PURE=1`` forces the pure-Python fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("ISOWEINGARTEN_PURE"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

rk4_lw = _impl.rk4_lw
fd_forms_grid = _impl.fd_forms_grid


def backends():
    """Return the importable kernel modules keyed by name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
