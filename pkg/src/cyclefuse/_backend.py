"""Select the compiled kernels when importable, else the numpy fallback.

Set ``CYCLEFUSE_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os
from types import ModuleType

from cyclefuse import _fallback

compiled: ModuleType | None
try:
    from cyclefuse import _kernels as compiled
except ImportError:
    compiled = None

if compiled is not None and os.environ.get("CYCLEFUSE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    kernels: ModuleType = compiled
    NAME = "cython"
else:
    kernels = _fallback
    NAME = "numpy"

fallback = _fallback
