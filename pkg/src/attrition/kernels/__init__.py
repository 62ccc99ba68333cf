"""Hot numeric loops, numba-compiled when available.

Set ``ATTRITION_NUMBA=0`` to force the pure-numpy path.  Both backends are
importable directly as ``kernels.numpy_backend`` and, if numba is installed,
``kernels.numba_backend``.
"""

import os

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None

USE_NUMBA = numba_backend is not None and os.environ.get("ATTRITION_NUMBA", "1") != "0"
_impl = numba_backend if USE_NUMBA else numpy_backend
BACKEND = "numba" if USE_NUMBA else "numpy"

backward_values = _impl.backward_values
enumerate_best = _impl.enumerate_best
dominance_matrix = _impl.dominance_matrix
mon_violations = _impl.mon_violations
discounted_totals = _impl.discounted_totals
sign_changes = _impl.sign_changes

__all__ = [
    "BACKEND",
    "backward_values",
    "enumerate_best",
    "dominance_matrix",
    "mon_violations",
    "discounted_totals",
    "sign_changes",
    "numpy_backend",
    "numba_backend",
]
