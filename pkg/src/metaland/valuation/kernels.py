"""Kernel selection: compiled extension when available, numpy fallback
otherwise. Set METALAND_KERNEL=python to force the fallback."""

from __future__ import annotations

import os

from . import _treekern_py


def _load():
    if os.environ.get("METALAND_KERNEL", "").lower() == "python":
        return _treekern_py
    try:
        from . import _treekern  # compiled at install time; optional

        return _treekern
    except ImportError:
        return _treekern_py


_impl = _load()

grow_tree = _impl.grow_tree
KERNEL_NAME: str = _impl.KERNEL_NAME


def available_kernels() -> dict[str, object]:
    out = {"python": _treekern_py}
    try:
        from . import _treekern

        out["cython"] = _treekern
    except ImportError:
        pass
    return out
