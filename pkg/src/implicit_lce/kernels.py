"""Kernel backend selection.

The compiled extension covers block widths up to 63 bits; the pure-Python
module covers everything.  The environment variable IMPLICIT_LCE_BACKEND
("pure" or "c") forces a backend for benchmarking and debugging.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built; pure fallback only
    _ckernels = None


def available_backends():
    return ("pure", "c") if _ckernels is not None else ("pure",)


def get_backend(name):
    if name == "pure":
        return _pykernels
    if name == "c":
        if _ckernels is None:
            raise ValueError("compiled kernels are not available")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def select(tau, prefer=None):
    """Best backend for the given block width, honoring overrides."""
    forced = prefer or os.environ.get("IMPLICIT_LCE_BACKEND")
    if forced:
        k = get_backend(forced)
        if tau > k.MAX_TAU:
            raise ValueError(f"backend {forced!r} supports tau <= {k.MAX_TAU}")
        return k
    if _ckernels is not None and tau <= _ckernels.MAX_TAU:
        return _ckernels
    return _pykernels
