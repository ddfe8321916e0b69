"""Kernel backend selection: compiled Cython kernels when built, pure Python
otherwise.  Both produce bit-identical results; HHKIT_BACKEND=pure|compiled
forces one explicitly."""
from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels_c
except ImportError:
    _kernels_c = None


def available() -> tuple[str, ...]:
    return ("compiled", "pure") if _kernels_c is not None else ("pure",)


def get(name: str | None = None):
    """Return a kernel module by name, or the default (compiled if built)."""
    if name is None:
        name = os.environ.get("HHKIT_BACKEND")
    if name is None:
        return _kernels_c if _kernels_c is not None else _kernels_py
    if name == "pure":
        return _kernels_py
    if name == "compiled":
        if _kernels_c is None:
            raise RuntimeError("compiled kernels requested but not built; "
                               "reinstall with a C compiler or unset HHKIT_BACKEND")
        return _kernels_c
    raise ValueError(f"unknown backend {name!r} (choose 'pure' or 'compiled')")


def default_name() -> str:
    return get().BACKEND_NAME
