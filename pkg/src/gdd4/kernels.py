"""Hot kernels, compiled when available.

The compiled extension ``gdd4._ckernels`` is used if it imports; otherwise
the pure-Python twin in ``gdd4._pykernels``. Set ``GDD4_KERNELS=python`` to
force the fallback (``GDD4_KERNELS=compiled`` makes a missing extension an
error).
"""

from __future__ import annotations

import os

from . import _pykernels

FOUND, EXHAUSTED, BUDGET, CANCELLED = 0, 1, 2, 3

_choice = os.environ.get("GDD4_KERNELS", "auto").lower()
compiled = None
if _choice != "python":
    try:
        from . import _ckernels as compiled  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise

_impl = compiled if compiled is not None else _pykernels
BACKEND = "compiled" if compiled is not None else "python"

pair_counts = _impl.pair_counts
exact_cover = _impl.exact_cover


def backend(name: str):
    """Kernel module by name (``"compiled"`` or ``"python"``)."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        if compiled is None:
            raise ImportError("compiled kernels are not built")
        return compiled
    raise ValueError(f"unknown kernel backend {name!r}")
