"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
fallback is loaded. Setting ``AMPLICOUNT_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("AMPLICOUNT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

q_iterate = _impl.q_iterate
power_rows = _impl.power_rows

__all__ = ["BACKEND", "q_iterate", "power_rows", "_kernels_py"]
