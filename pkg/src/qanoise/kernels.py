"""Backend selection for the edit-distance kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module is used. Setting ``QANOISE_KERNELS=python`` forces the fallback.

Callers should go through the module attributes (``kernels.levenshtein``)
so that :func:`use_backend` takes effect everywhere.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

BACKEND = ""
levenshtein = _pykernels.levenshtein
osa_distance = _pykernels.osa_distance
nearest = _pykernels.nearest


def use_backend(name):
    """Switch all kernels to backend ``name`` ("python" or "cython")."""
    global BACKEND, levenshtein, osa_distance, nearest
    if name not in BACKENDS:
        raise ValueError(f"kernel backend {name!r} is not available; have {sorted(BACKENDS)}")
    mod = BACKENDS[name]
    levenshtein = mod.levenshtein
    osa_distance = mod.osa_distance
    nearest = mod.nearest
    BACKEND = name


def _default_backend():
    forced = os.environ.get("QANOISE_KERNELS", "").strip().lower()
    if forced:
        return forced
    return "cython" if "cython" in BACKENDS else "python"


use_backend(_default_backend())
