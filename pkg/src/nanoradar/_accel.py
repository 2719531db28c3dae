"""Backend selection for the hot kernels.

Kernels in :mod:`nanoradar._kernels` come in two flavours: a numba ``@njit``
loop version and a vectorised pure-numpy version. The numba path is used when
numba imports and ``NANORADAR_DISABLE_NUMBA`` is unset (or ``0``/``false``).
The flag is read once, at import time.
"""
import os

_truthy = {"1", "true", "yes", "on"}
DISABLE_FLAG = os.environ.get("NANORADAR_DISABLE_NUMBA", "").strip().lower() in _truthy

try:
    import numba
except ImportError:  # pragma: no cover - numba ships with the test env
    numba = None

NUMBA_AVAILABLE = numba is not None
NUMBA_ENABLED = NUMBA_AVAILABLE and not DISABLE_FLAG


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise a no-op decorator.

    The numba-flavoured kernels stay callable (as plain Python) without numba,
    which keeps the cross-backend tests meaningful everywhere.
    """
    if NUMBA_AVAILABLE:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def backend_name():
    return "numba" if NUMBA_ENABLED else "numpy"
