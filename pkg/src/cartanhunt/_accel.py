"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` module. Setting ``CARTANHUNT_PURE=1`` forces the
fallback.
"""

import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _ckernels
except ImportError:
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and os.environ.get("CARTANHUNT_PURE", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]

closure_pairs = _impl.closure_pairs
check_associativity = _impl.check_associativity
check_associativity_sampled = _impl.check_associativity_sampled
regular_flags = _impl.regular_flags
j_components = _impl.j_components
