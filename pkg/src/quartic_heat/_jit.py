"""Numba switch.

Set ``QUARTIC_HEAT_DISABLE_JIT=1`` to run every kernel through its pure
numpy path (useful for debugging and for machines without numba).
"""

import os

_flag = os.environ.get("QUARTIC_HEAT_DISABLE_JIT", "").strip().lower()
JIT_REQUESTED = _flag not in ("1", "true", "yes", "on")

try:
    from numba import njit as _numba_njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

JIT_ENABLED = JIT_REQUESTED and NUMBA_AVAILABLE


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise.

    The decorated function is always compiled when numba is importable so the
    benchmark can compare both paths in one process; whether the library
    *dispatches* to it is governed by ``JIT_ENABLED``.
    """
    if NUMBA_AVAILABLE:
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(f):
        return f

    return wrap
