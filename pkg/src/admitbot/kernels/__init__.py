"""BM25 scoring kernel with compiled and pure-Python backends.

The compiled Cython extension is used when available; set
``ADMITBOT_PURE_KERNELS=1`` to force the numpy fallback (used by the
benchmark and to debug build issues). Both backends produce identical
scores.
"""

import os

if os.environ.get("ADMITBOT_PURE_KERNELS") == "1":
    from . import pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]

        BACKEND = "native"
    except ImportError:
        from . import pure as _impl

        BACKEND = "pure"

bm25_scores = _impl.bm25_scores

__all__ = ["bm25_scores", "BACKEND"]
