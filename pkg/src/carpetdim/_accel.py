"""Optional numba acceleration.

Hot kernels are written once as plain Python loops and compiled with
``numba.njit`` when numba is importable.  Setting ``CARPET_DIM_DISABLE_NUMBA=1``
routes every kernel call to its pure-numpy counterpart instead; the flag is
read at call time so tests and benchmarks can flip it.
"""

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

DISABLE_ENV = "CARPET_DIM_DISABLE_NUMBA"
THREADS_ENV = "CARPET_DIM_THREADS"


def njit(*args, **kwargs):
    """``numba.njit(cache=True, nogil=True)`` or the identity decorator."""
    if not HAVE_NUMBA:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return numba.njit(*args, **kwargs)


def numba_enabled():
    flag = os.environ.get(DISABLE_ENV, "").strip().lower()
    return HAVE_NUMBA and flag not in ("1", "true", "yes", "on")


def max_workers():
    """Worker cap from ``CARPET_DIM_THREADS``; defaults to the CPU count."""
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)
