"""Kernel selection: the compiled extension when it imports, else pure Python.

Set ``TWOECSS_PURE=1`` to force the pure-Python kernels.
"""

from __future__ import annotations

import os

from . import _kernels_py

FOUND = _kernels_py.FOUND
INFEASIBLE = _kernels_py.INFEASIBLE
BUDGET = _kernels_py.BUDGET

_compiled = None
if not os.environ.get("TWOECSS_PURE"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined, no-redef]
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None

backend = _compiled if _compiled is not None else _kernels_py
BACKEND_NAME = "cython" if _compiled is not None else "python"

bridges = backend.bridges
is_two_edge_connected = backend.is_two_edge_connected
min_2ecss = backend.min_2ecss
