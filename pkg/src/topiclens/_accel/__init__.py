"""Kernel backend selection.

The compiled extension is preferred; the pure-Python fallback is used
when the extension is unavailable or when TOPICLENS_PURE_PYTHON is set.
Both backends are bit-for-bit equivalent (see tests/test_backends.py),
so the choice only affects speed.
"""

import os

if os.environ.get("TOPICLENS_PURE_PYTHON"):
    from . import _core_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _core_py as _impl

        BACKEND = "python"

Pcg32 = _impl.Pcg32
optimize_embedding = _impl.optimize_embedding
place_boxes = _impl.place_boxes

__all__ = ["BACKEND", "Pcg32", "optimize_embedding", "place_boxes"]
