"""Hot-loop kernels with a compiled core and a pure-NumPy fallback.

Set ``HARDYLIP_PURE=1`` to force the fallback (used by the benchmark and by
backend-parity tests).
"""

from __future__ import annotations

import os

if os.environ.get("HARDYLIP_PURE", "") == "1":
    from . import _pykern as _impl

    BACKEND = "pure"
else:
    try:
        from . import _ckern as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _pykern as _impl

        BACKEND = "pure"

pwl_values = _impl.pwl_values
pwl_slopes = _impl.pwl_slopes
sc_log_deriv = _impl.sc_log_deriv
straddle_kernel = _impl.straddle_kernel
blaschke_half_plane = _impl.blaschke_half_plane


def backend_name() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND
