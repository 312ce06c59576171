"""Kernel backend selection.

The compiled Cython module is used when it was built; otherwise (or when
``PADICREG_PURE_PYTHON`` is set to a non-empty value) the pure-Python
implementations are used. Both expose the same three functions.
"""

import os

from . import _kernels_py

if os.environ.get("PADICREG_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

int_valuation = _impl.int_valuation
bareiss_solve = _impl.bareiss_solve
residual_valuations = _impl.residual_valuations
