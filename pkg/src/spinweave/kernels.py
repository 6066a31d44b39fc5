"""Backend selection for the hot loops.

The compiled extension ``spinweave._kernels`` is used when it imports; otherwise
the numpy implementation in ``spinweave._kernels_py`` is used. Setting
``SPINWEAVE_PURE=1`` forces the fallback.
"""
import os

import numpy as np

from . import _kernels_py

_compiled = None
if not os.environ.get("SPINWEAVE_PURE"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _kernels_py


def ordered_exp_product(hams, durations):
    """Time-ordered product of exp(-i H_m dt_m), first segment rightmost."""
    return _impl.ordered_exp_product(
        np.ascontiguousarray(hams, dtype=np.complex128),
        np.ascontiguousarray(durations, dtype=np.float64),
    )


def pair_hamiltonian(single, onsite):
    """Two-excitation matrix from the one-excitation hop matrix and on-site energies."""
    return _impl.pair_hamiltonian(
        np.ascontiguousarray(single, dtype=np.complex128),
        np.ascontiguousarray(onsite, dtype=np.float64),
    )


def available_backends():
    """Mapping of backend name to kernel module, for tests and benchmarks."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
