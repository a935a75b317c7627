"""JIT switch.

Kernels in :mod:`optnet.kernels` come in two flavours: a numba ``@njit``
version and a plain numpy version.  The numba flavour is used when numba
imports cleanly and ``OPTNET_NO_JIT`` is unset (or ``0``).
"""

from __future__ import annotations

import os

_FLAG = os.environ.get("OPTNET_NO_JIT", "0").strip().lower()

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_JIT = HAVE_NUMBA and _FLAG in ("", "0", "false", "no")


def njit(*args, **kwargs):
    """``numba.njit`` with ``cache=True``, or an identity decorator without numba."""
    if HAVE_NUMBA:
        import numba

        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)

    def wrap(fn):
        return fn

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap


def threads() -> int:
    """Parallelism cap from ``OPTNET_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("OPTNET_THREADS", "1")))
    except ValueError:
        return 1
