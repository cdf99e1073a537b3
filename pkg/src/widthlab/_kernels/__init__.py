"""Kernel dispatch: compiled greedy-cover selection with pure-Python fallback.

The compiled extension is optional. Selection happens once at import time:
set ``WIDTHLAB_PURE_PYTHON=1`` to force the pure-Python kernel (useful for
debugging and for the benchmark comparison in ``benchmarks/``).
"""

import os

from .greedy_cover_py import greedy_cover as greedy_cover_python

BACKEND = "python"
greedy_cover = greedy_cover_python

if os.environ.get("WIDTHLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._greedy_cover_cy import greedy_cover as _greedy_cover_compiled

        greedy_cover = _greedy_cover_compiled
        BACKEND = "compiled"
    except ImportError:
        pass


def kernel_backend():
    """Name of the selected kernel backend: 'compiled' or 'python'."""
    return BACKEND
