"""Optional numba acceleration.

Set ``ROOMMATES_NO_NUMBA=1`` to run every kernel as plain Python over numpy
arrays.  The flag is read once at import time.
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("ROOMMATES_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba as _nb
except ImportError:
    _nb = None

HAVE_NUMBA = _nb is not None


def njit(fn):
    """``numba.njit(cache=True)`` when enabled, identity otherwise."""
    if _nb is None:
        return fn
    return _nb.njit(cache=True)(fn)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "python"
