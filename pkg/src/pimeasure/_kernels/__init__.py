"""Hot kernels: compiled Cython build when available, pure Python otherwise.

Set ``PIMEASURE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels as python

compiled = None
if not os.environ.get("PIMEASURE_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else python

BACKEND = "cython" if compiled is not None else "python"
nullspace_mod = _impl.nullspace_mod
sieve = _impl.sieve

__all__ = ["BACKEND", "compiled", "python", "nullspace_mod", "sieve"]
