"""Batched GF(2^m) matrix products for the block codec paths.

The hot loop is compiled with numba when it is importable; setting the
environment variable NPC_NO_NUMBA=1 forces the pure-numpy fallback.
Both implementations are exported so tests and the benchmark script can
compare them directly.  Tables-backed fields only (m <= 8, uint8 data).
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

_FLAG = os.environ.get("NPC_NO_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG in ("1", "true", "yes", "on")
NUMBA_ACTIVE = _HAVE_NUMBA and not NUMBA_DISABLED

__all__ = [
    "NUMBA_ACTIVE",
    "NUMBA_DISABLED",
    "gf_matmul",
    "gf_matmul_numpy",
    "gf_matmul_numba",
]


def gf_matmul_numpy(a: np.ndarray, b: np.ndarray, log: np.ndarray, exp: np.ndarray) -> np.ndarray:
    """Matrix product over GF(2^m) via log/antilog gathers, vectorized."""
    a = np.ascontiguousarray(a, dtype=np.uint8)
    b = np.ascontiguousarray(b, dtype=np.uint8)
    n, kk = a.shape
    mm = b.shape[1]
    out = np.zeros((n, mm), dtype=np.uint8)
    la = log[a]
    lb = log[b]
    for l in range(kk):
        prod = exp[la[:, l][:, None] + lb[l][None, :]].astype(np.uint8)
        col_zero = a[:, l] == 0
        row_zero = b[l] == 0
        if col_zero.any():
            prod[col_zero, :] = 0
        if row_zero.any():
            prod[:, row_zero] = 0
        out ^= prod
    return out


def _matmul_loops(a, b, log, exp, out):
    n, kk = a.shape
    mm = b.shape[1]
    for i in range(n):
        for j in range(mm):
            acc = 0
            for l in range(kk):
                x = a[i, l]
                y = b[l, j]
                if x != 0 and y != 0:
                    acc ^= exp[log[x] + log[y]]
            out[i, j] = acc


if _HAVE_NUMBA:
    _matmul_jit = njit(cache=True)(_matmul_loops)

    def gf_matmul_numba(a: np.ndarray, b: np.ndarray, log: np.ndarray, exp: np.ndarray) -> np.ndarray:
        a = np.ascontiguousarray(a, dtype=np.uint8)
        b = np.ascontiguousarray(b, dtype=np.uint8)
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
        _matmul_jit(a, b, log, exp, out)
        return out

else:  # pragma: no cover
    gf_matmul_numba = None


def gf_matmul(a: np.ndarray, b: np.ndarray, log: np.ndarray, exp: np.ndarray) -> np.ndarray:
    """Matrix product over GF(2^m); picks the compiled path unless disabled."""
    if NUMBA_ACTIVE:
        return gf_matmul_numba(a, b, log, exp)
    return gf_matmul_numpy(a, b, log, exp)
