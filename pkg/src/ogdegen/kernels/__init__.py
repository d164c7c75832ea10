"""Hot kernels with a compiled backend and a pure-Python fallback.

The compiled extension is used when it was built and imports cleanly, unless
the environment variable OGDEGEN_PURE_PYTHON is set to a non-empty value
other than "0".  ``BACKEND`` names the active choice.
"""
import os

import numpy as np

from . import _pykernels

_force_py = os.environ.get("OGDEGEN_PURE_PYTHON", "") not in ("", "0")
_c = None
if not _force_py:
    try:
        from . import _ckernels as _c
    except ImportError:
        _c = None

BACKEND = "cython" if _c is not None else "python"

# int64 products in the compiled checks must stay below 2**63
_SAFE = 2 ** 62


def int_rank(rows):
    if _c is not None:
        return _c.int_rank(rows)
    return _pykernels.int_rank(rows)


def point_check(signs, bounds, xnum, den):
    """(first violated constraint or -1, tight count) for x = xnum / den.

    ``signs`` is an (m, n) integer array, ``bounds`` length m, den > 0.
    """
    if _c is not None:
        big = max((abs(int(v)) for v in xnum), default=0) * len(xnum)
        gmax = int(np.abs(bounds).max()) if len(bounds) else 0
        if big < _SAFE and gmax * abs(den) < _SAFE:
            return _c.point_check(
                np.ascontiguousarray(signs, dtype=np.int64),
                np.ascontiguousarray(bounds, dtype=np.int64),
                np.asarray([int(v) for v in xnum], dtype=np.int64),
                int(den),
            )
    return _pykernels.point_check(
        [[int(e) for e in r] for r in signs], [int(g) for g in bounds],
        [int(v) for v in xnum], int(den))


def vertex_candidates(normals, bounds):
    if _c is not None:
        return _c.vertex_candidates(
            np.ascontiguousarray(normals, dtype=np.int64),
            np.ascontiguousarray(bounds, dtype=np.int64),
        )
    return _pykernels.vertex_candidates(
        [[int(e) for e in r] for r in normals], [int(g) for g in bounds])
