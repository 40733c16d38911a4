"""Numba switch.

Set ``BIPINV_DISABLE_NUMBA=1`` to route every hot kernel through its numpy
fallback. The flag is read once at import; tests flip ``USE_NUMBA`` directly.
"""

import os

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    numba = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("BIPINV_DISABLE_NUMBA", "0") not in ("1", "true", "yes")


def njit(*args, **kwargs):
    if NUMBA_AVAILABLE:
        return numba.njit(*args, **kwargs)

    def wrap(func):
        return func

    return wrap


def use_numba():
    return USE_NUMBA
