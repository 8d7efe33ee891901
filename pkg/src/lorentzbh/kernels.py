"""Backend selection for the hot kernels.

The compiled extension is used when it was built; set
``LORENTZBH_PURE_PYTHON=1`` to force the NumPy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("LORENTZBH_PURE_PYTHON", "") != "1":
    try:
        from . import _kernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

contract_except = _impl.contract_except
alternating_ascent = _impl.alternating_ascent
poly_grid = _impl.poly_grid


def available_backends():
    out = {"python": _kernels_py}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out
