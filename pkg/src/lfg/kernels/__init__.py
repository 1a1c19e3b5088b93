"""Hot numeric kernels with a compiled fast path and a numpy fallback.

The compiled extension (built from _native.pyx) is preferred when present;
set LFG_PURE_PYTHON=1 to force the numpy backend.  Both implement the same
semantics, checked by the parity tests.
"""

import os

from . import pure

if os.environ.get("LFG_PURE_PYTHON") == "1":
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _native as _impl

        BACKEND = "native"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

knn_predict = _impl.knn_predict
best_gini_split = _impl.best_gini_split


def available_backends() -> dict:
    """Importable backends by name (for benchmarks and parity tests)."""
    backends = {"pure": pure}
    try:
        from . import _native

        backends["native"] = _native
    except ImportError:
        pass
    return backends
