"""Select the compiled kernels when available, else the pure-Python fallback.

Set ``SKELLAM_ODDS_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("SKELLAM_ODDS_PURE_PYTHON", "") not in ("", "0"):
    from . import _fallback as kernels

    COMPILED = False
else:
    try:
        from . import _kernels as kernels

        COMPILED = True
    except ImportError:
        from . import _fallback as kernels

        COMPILED = False

BACKEND = "cython" if COMPILED else "python"

__all__ = ["kernels", "COMPILED", "BACKEND"]
