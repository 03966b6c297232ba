"""Cycle-loop kernel backends.

The compiled extension (`_core`, Cython) and the pure-Python fallback
(`_pure`) implement the same `advance` contract and consume the random
stream identically, so a given seed produces bit-identical runs on both.
Selection happens once at import: the extension is used when it built.
"""

from __future__ import annotations

from . import _pure

try:  # pragma: no cover - depends on the build environment
    from . import _core

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover
    _core = None
    HAVE_COMPILED = False


def active_backend():
    """The preferred kernel module: compiled when available."""
    return _core if HAVE_COMPILED else _pure


def backend_name() -> str:
    return "compiled" if HAVE_COMPILED else "pure-python"
