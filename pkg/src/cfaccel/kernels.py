"""Backend selection for the integer kernels.

Prefers the compiled extension, falls back to the pure-Python module.
Set CFACCEL_PURE=1 to force the fallback (useful for benchmarking and
for ruling the extension out when debugging).
"""

import os

if os.environ.get("CFACCEL_PURE"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

poly_mul = _impl.poly_mul
taylor_shift = _impl.taylor_shift
series_div = _impl.series_div
BACKEND = _impl.BACKEND
