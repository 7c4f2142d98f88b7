"""Kernel dispatch.

The numba backend is used when importable; ``ISG_FORCE_NUMPY=1`` forces the
pure-numpy fallback (useful for debugging and for the benchmark baseline).
"""

from __future__ import annotations

import os

from . import np_kernels

if os.environ.get("ISG_FORCE_NUMPY") == "1":
    _impl = np_kernels
    BACKEND = "numpy"
else:
    try:
        from . import nb_kernels as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - exercised only without numba
        _impl = np_kernels
        BACKEND = "numpy"

assoc_failure = _impl.assoc_failure
inverse_vector = _impl.inverse_vector
natural_leq = _impl.natural_leq
compat_matrix = _impl.compat_matrix
down_closed_compatible_masks = _impl.down_closed_compatible_masks
masks_hitting_all = _impl.masks_hitting_all
