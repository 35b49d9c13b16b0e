"""Numba toggles shared by the hot-path modules.

JIT compilation is on whenever numba imports cleanly. Set ``KEYTRIE_NUMBA=0``
to force the interpreted path (same code, no compilation); useful on platforms
where numba is flaky and for A/B benchmarking.
"""

from __future__ import annotations

import os

_OFF_VALUES = {"0", "false", "off", "no"}


def _env_disabled() -> bool:
    return os.environ.get("KEYTRIE_NUMBA", "").strip().lower() in _OFF_VALUES


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on stripped installs
    numba = None
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and not _env_disabled()


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise.

    The decorated function keeps working either way; only throughput changes.
    """
    if NUMBA_ENABLED:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]

    def decorator(func):
        return func

    return decorator


def py_func(func):
    """Unwrap a jitted function back to its Python source function."""
    return getattr(func, "py_func", func)
