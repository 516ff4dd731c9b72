"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback.
Set ``SLIMECA_PURE=1`` to force the fallback (tests compare both).
"""

import os

from . import _fallback

try:
    if os.environ.get("SLIMECA_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _kernels as kernels

    BACKEND = "compiled"
except ImportError:
    kernels = _fallback
    BACKEND = "python"

# topology helpers are cheap, one-off and shared by both backends
neighbour_validity = _fallback.neighbour_validity
centre_weights = _fallback.centre_weights

__all__ = ["BACKEND", "kernels", "neighbour_validity", "centre_weights"]
