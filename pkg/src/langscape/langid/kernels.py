"""Selects the n-gram scoring kernel at import time.

Prefers the compiled extension; falls back to the pure-Python kernel when
the extension was not built. Set LANGSCAPE_PURE_PYTHON=1 to force the
fallback (used by the benchmark and the kernel-equivalence tests).
"""

from __future__ import annotations

import os

if os.environ.get("LANGSCAPE_PURE_PYTHON"):
    from . import _scorer_py as _backend

    BACKEND = "python"
else:
    try:
        from . import _scorer_c as _backend  # type: ignore[attr-defined]

        BACKEND = "c"
    except ImportError:
        from . import _scorer_py as _backend

        BACKEND = "python"

accumulate = _backend.accumulate
