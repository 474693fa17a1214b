"""Backend selection for the mod-p reduction kernels.

The compiled extension is used when it imports; otherwise the pure-Python module
is used.  ``FANORIGID_KERNEL=python`` forces the fallback.
"""

from __future__ import annotations

import os

from . import pyreduce

BACKEND = "python"
nf_modp = pyreduce.nf_modp
spoly_modp = pyreduce.spoly_modp

if os.environ.get("FANORIGID_KERNEL", "").lower() != "python":
    try:
        from . import _reduce
    except ImportError:  # extension not built
        _reduce = None
    if _reduce is not None:
        BACKEND = "cython"
        nf_modp = _reduce.nf_modp
        spoly_modp = _reduce.spoly_modp


def backends() -> dict:
    """All importable implementations, keyed by name."""
    out = {"python": pyreduce}
    try:
        from . import _reduce

        out["cython"] = _reduce
    except ImportError:
        pass
    return out
