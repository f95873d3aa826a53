"""Numba switch.

Setting ``GEVREY_LAB_DISABLE_NUMBA=1`` (or running without numba installed)
routes every kernel in :mod:`gevrey_lab.kernels` to its pure-numpy twin.
"""

from __future__ import annotations

import os

# the TBB layer shipped in some images is too old and warns on first use
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

_FLAG = "GEVREY_LAB_DISABLE_NUMBA"

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

USE_NUMBA = _numba is not None and os.environ.get(_FLAG, "").strip() not in ("1", "true", "yes")


def njit(*args, **kwargs):
    """``numba.njit`` with caching on, or an identity decorator without numba."""
    if _numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return _numba.njit(*args, **kwargs)


def set_threads(n: int) -> int:
    """Set the numba thread count, clamped to what the runtime allows."""
    if _numba is None or not USE_NUMBA:
        return 1
    n = max(1, min(int(n), _numba.config.NUMBA_NUM_THREADS))
    _numba.set_num_threads(n)
    return n
