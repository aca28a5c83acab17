"""Kernel backend selection.

The compiled extension is used when it imports; otherwise, or when the
``MMPROP_PURE_PYTHON`` environment variable is set, the numpy fallback is.
"""
import os

if os.environ.get("MMPROP_PURE_PYTHON"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

ar1_filter_2d = _impl.ar1_filter_2d
bilinear = _impl.bilinear

__all__ = ["BACKEND", "ar1_filter_2d", "bilinear"]
