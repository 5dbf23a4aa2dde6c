"""Selection of the propagation kernel at import time.

The compiled extension is preferred when importable; setting the environment
variable GUPWELL_PURE_PYTHON to a nonempty value forces the NumPy fallback.
Both kernels implement the same algorithm with the same constants, so the
choice affects speed, not results beyond rounding.
"""

from __future__ import annotations

import os

from . import _core_py

if os.environ.get("GUPWELL_PURE_PYTHON"):
    _impl = _core_py
    _BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        _BACKEND = "compiled"
    except ImportError:
        _impl = _core_py
        _BACKEND = "python"

STATUS_OK = _core_py.STATUS_OK
STATUS_STEP_LIMIT = _core_py.STATUS_STEP_LIMIT
STATUS_UNDERFLOW = _core_py.STATUS_UNDERFLOW

propagate_coeffs = _impl.propagate_coeffs


def active_backend() -> str:
    """'compiled' or 'python'."""
    return _BACKEND


def get_kernel(name: str):
    """Fetch a specific kernel by name; used by tests and the benchmark."""
    if name == "python":
        return _core_py.propagate_coeffs
    if name == "compiled":
        from . import _core  # type: ignore[attr-defined]

        return _core.propagate_coeffs
    raise ValueError(f"unknown backend {name!r}")
