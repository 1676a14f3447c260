"""Kernel backend selection.

The compiled extension is used when it imports; ``LRDCP_BACKEND=python``
forces the numpy fallback. ``NAME`` records which one is active.
"""
import os

_forced = os.environ.get("LRDCP_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _pykernels as kernels
    NAME = "python"
else:
    try:
        from . import _kernels as kernels
        NAME = "cython"
    except ImportError:
        if _forced == "cython":
            raise
        from . import _pykernels as kernels
        NAME = "python"

sn_values = kernels.sn_values
sn_rows = kernels.sn_rows
window_sn_max = kernels.window_sn_max
