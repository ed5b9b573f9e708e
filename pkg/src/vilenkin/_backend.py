"""Select the compiled kernels when available, else the NumPy fallback.

``VILENKIN_BACKEND=numpy`` forces the fallback at import time.
"""
import os
from contextlib import contextmanager

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"numpy": _fallback}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

_requested = os.environ.get("VILENKIN_BACKEND", "").strip().lower()
if _requested and _requested not in _BACKENDS:
    raise ImportError(f"VILENKIN_BACKEND={_requested!r} is not available; "
                      f"have {sorted(_BACKENDS)}")
_active = _requested or ("cython" if _compiled is not None else "numpy")


def available() -> list[str]:
    return sorted(_BACKENDS)


def name() -> str:
    return _active


def kernels():
    return _BACKENDS[_active]


def set_backend(which: str) -> None:
    global _active
    if which not in _BACKENDS:
        raise ValueError(f"unknown backend {which!r}; have {available()}")
    _active = which


@contextmanager
def use_backend(which: str):
    previous = _active
    set_backend(which)
    try:
        yield
    finally:
        set_backend(previous)
