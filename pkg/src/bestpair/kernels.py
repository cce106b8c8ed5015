"""Sweep backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
fallback takes over.  Setting ``BESTPAIR_BACKEND=python`` forces the
fallback.
"""
import importlib
import os

from . import _pykernel

_FORCED = os.environ.get("BESTPAIR_BACKEND", "").strip().lower()

try:
    if _FORCED == "python":
        raise ImportError("fallback forced by BESTPAIR_BACKEND")
    from . import _kernel as _impl
    BACKEND = "compiled"
except ImportError:
    _impl = _pykernel
    BACKEND = "python"

sweep_harmonic = _impl.sweep_harmonic
sweep_relaxed = _impl.sweep_relaxed


def load(name: str):
    """Return the kernel module called ``name`` ("compiled" or "python")."""
    if name == "python":
        return _pykernel
    if name == "compiled":
        return importlib.import_module("bestpair._kernel")
    raise ValueError(f"unknown backend {name!r}")


def available() -> list[str]:
    names = ["python"]
    try:
        load("compiled")
    except ImportError:
        pass
    else:
        names.insert(0, "compiled")
    return names
