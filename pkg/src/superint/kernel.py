"""Kernel backend selection: compiled extension when available, pure otherwise.

Set SUPERINT_PURE=1 in the environment to force the pure-Python kernel
(used by the benchmark and the backend-parity tests).
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("SUPERINT_PURE"):
    _impl = _kernel_py
else:
    try:
        from . import _speedups as _impl
    except ImportError:
        _impl = _kernel_py

BACKEND = _impl.BACKEND
mul_terms = _impl.mul_terms
square_terms = _impl.square_terms
add_into = _impl.add_into
scale_terms = _impl.scale_terms
neg_terms = _impl.neg_terms


def available_backends():
    """Map backend name -> kernel module, for benchmarks and parity tests."""
    out = {"pure": _kernel_py}
    try:
        from . import _speedups

        out["compiled"] = _speedups
    except ImportError:
        pass
    return out
