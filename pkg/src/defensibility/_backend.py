"""Pick the compiled search kernel when it is built, else the pure-Python one.

Set ``DEFENSIBILITY_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernel_py

PURE_PYTHON_ENV = "DEFENSIBILITY_PURE_PYTHON"


def _load_compiled():
    try:
        from . import _kernel
    except ImportError:
        return None
    return _kernel


_compiled = _load_compiled()

if _compiled is not None and os.environ.get(PURE_PYTHON_ENV, "") in ("", "0"):
    kernel = _compiled
    BACKEND = "compiled"
else:
    kernel = _kernel_py
    BACKEND = "python"


def available_kernels() -> dict:
    """All importable kernels keyed by backend name."""
    out = {"python": _kernel_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
