"""Select the simulation kernel at import time.

The compiled extension is used when it was built; otherwise, or when
``PERPTAIL_BACKEND=python`` is set, the numpy fallback runs instead.
Both produce the same draws up to last-bit differences in libm.
"""

from __future__ import annotations

import os

from . import _kernel_py
from .tail_models import BISECT_STEPS, MixingLaw

try:
    if os.environ.get("PERPTAIL_BACKEND", "").lower() == "python":
        raise ImportError("python backend forced")
    from . import _kernel as _ext
except ImportError:
    _ext = None

BACKEND = "cython" if _ext is not None else "python"


def available_backends() -> tuple:
    return ("cython", "python") if _ext is not None else ("python",)


def simulate_block(law: MixingLaw, q: float, eps: float, max_terms: int, key: int,
                   first: int, n: int, backend: str = None):
    """Run draws ``first .. first+n-1`` of substream ``key`` on the chosen kernel."""
    backend = backend or BACKEND
    if backend == "cython":
        if _ext is None:
            raise RuntimeError("compiled kernel is not built; run `python setup.py build_ext --inplace`")
        kind, a, b, p_one = law.kernel_code()
        return _ext.simulate_block(kind, a, b, p_one, float(q), float(eps), int(max_terms),
                                   int(key), int(first), int(n), BISECT_STEPS)
    if backend == "python":
        return _kernel_py.simulate_block(law, float(q), float(eps), int(max_terms), key, first, n)
    raise ValueError(f"unknown backend {backend!r}")
