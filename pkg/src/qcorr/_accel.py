"""Numba switch for the hot kernels.

Set ``QCORR_DISABLE_NUMBA=1`` to run the vectorized numpy kernels instead of
the jitted loop kernels. The flag is read once, at import time.
"""
import os

_FLAG = os.environ.get("QCORR_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG in ("1", "true", "yes", "on")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, else identity.

    Loop kernels are always wrapped so the benchmark can compare them with the
    numpy path even when the env flag selects numpy.
    """
    if numba is None:
        return func
    return numba.njit(cache=True)(func)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
