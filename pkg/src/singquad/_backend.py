"""Selects the compiled kernel module when it is importable.

Set ``SINGQUAD_PURE_PYTHON=1`` to force the numpy fallback.
"""

import os

from . import _pycore

try:
    if os.environ.get("SINGQUAD_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from . import _core as core

    COMPILED = True
except ImportError:
    core = _pycore
    COMPILED = False

fallback = _pycore

__all__ = ["core", "fallback", "COMPILED"]
