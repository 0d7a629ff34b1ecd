"""Optional numba acceleration.

Set ``QCNMF_NUMBA=0`` before import to force the pure-numpy kernels.
"""

import os

_flag = os.environ.get("QCNMF_NUMBA", "1").strip().lower()

try:
    if _flag in ("0", "false", "no", "off"):
        raise ImportError("numba disabled by QCNMF_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA
