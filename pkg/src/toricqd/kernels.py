"""Backend selection for the arithmetic kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``TORICQD_PURE_PYTHON`` is set to a non-empty value,
the pure-Python module is used.  Both expose the same functions.
"""

import os

from toricqd import _pykernels

if os.environ.get("TORICQD_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from toricqd import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

Table = _impl.Table
normalize = _impl.normalize
zero = _impl.zero
is_zero = _impl.is_zero
add = _impl.add
sub = _impl.sub
scale = _impl.scale
vec_mul = _impl.vec_mul
laurent_mul = _impl.laurent_mul
laurent_add = _impl.laurent_add


def backends():
    """Available kernel modules keyed by name (for tests and benchmarks)."""
    out = {"python": _pykernels}
    try:
        from toricqd import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
