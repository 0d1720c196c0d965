"""Numba switch.

Set ``BCE_DISABLE_NUMBA=1`` to force the pure-numpy code paths.  The flag is
read once at import time.
"""

import os

_DISABLED = os.environ.get("BCE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    import numba as _nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None

HAVE_NUMBA = _nb is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` with caching on, or a no-op decorator without numba."""
    if _nb is None:
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn
    kwargs.setdefault("cache", True)
    return _nb.njit(*args, **kwargs)
