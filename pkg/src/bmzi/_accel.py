"""Numba toggle.

Set ``BMZI_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable. The choice is made once, at import time.
"""
import os

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is optional
    numba = None
    HAVE_NUMBA = False

_OFF = {"1", "true", "yes", "on"}

ENABLE_NUMBA = HAVE_NUMBA and os.environ.get("BMZI_DISABLE_NUMBA", "").strip().lower() not in _OFF
CACHE_NUMBA = True


def jit_kernel(func):
    """Compile ``func`` in nopython mode when numba is installed.

    Returns None without numba so callers can test for availability; this is
    independent of ``ENABLE_NUMBA`` so the benchmark can time both paths.
    """
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=CACHE_NUMBA)(func)


def backend_name():
    return "numba" if ENABLE_NUMBA else "numpy"
