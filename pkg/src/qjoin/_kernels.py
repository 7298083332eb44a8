"""Inner loops of the brute-force compatible-pair search.

Two interchangeable implementations: a numba-compiled loop with early exit,
and a vectorized numpy one. Set ``QJOIN_DISABLE_NUMBA=1`` to force numpy.
"""

from __future__ import annotations

import os

import numpy as np

_CHUNK_ELEMS = 1 << 22

try:  # pragma: no cover - exercised implicitly
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    flag = os.environ.get("QJOIN_DISABLE_NUMBA", "").strip().lower()
    return HAVE_NUMBA and flag not in ("1", "true", "yes", "on")


def first_compatible_numpy(vm: np.ndarray, wm: np.ndarray) -> tuple[int, int]:
    """First (a, b) in row-major order with vm[a].T @ wm[b] entrywise positive.

    ``vm`` has shape (A, R, k) and ``wm`` shape (B, R, l); callers have
    already matched interior row sums. Returns (-1, -1) when no pair works.
    """
    A, R, k = vm.shape
    B, _, l = wm.shape
    if A == 0 or B == 0:
        return -1, -1
    vpos = vm > 0
    wpos = wm > 0
    step = max(1, _CHUNK_ELEMS // max(1, B * k * l * R))
    for start in range(0, A, step):
        block = vpos[start : start + step]
        # entry (a, b, i, j) is True iff some interior row hits both column i and column j
        hit = np.einsum("asi,bsj->abij", block.astype(np.uint8), wpos.astype(np.uint8)) > 0
        ok = hit.all(axis=(2, 3))
        if ok.any():
            a, b = np.unravel_index(int(np.argmax(ok)), ok.shape)
            return start + int(a), int(b)
    return -1, -1


def _first_compatible_py(vm, wm):
    A, R, k = vm.shape
    B, _, l = wm.shape
    for a in range(A):
        for b in range(B):
            good = True
            for i in range(k):
                for j in range(l):
                    hit = False
                    for s in range(R):
                        if vm[a, s, i] > 0 and wm[b, s, j] > 0:
                            hit = True
                            break
                    if not hit:
                        good = False
                        break
                if not good:
                    break
            if good:
                return a, b
    return -1, -1


if HAVE_NUMBA:
    _first_compatible_jit = numba.njit(cache=True, nogil=True)(_first_compatible_py)
else:  # pragma: no cover
    _first_compatible_jit = None


def first_compatible_numba(vm: np.ndarray, wm: np.ndarray) -> tuple[int, int]:
    if _first_compatible_jit is None:  # pragma: no cover
        raise RuntimeError("numba is not installed")
    a, b = _first_compatible_jit(np.ascontiguousarray(vm, dtype=np.int64), np.ascontiguousarray(wm, dtype=np.int64))
    return int(a), int(b)


def first_compatible(vm: np.ndarray, wm: np.ndarray) -> tuple[int, int]:
    if numba_enabled():
        return first_compatible_numba(vm, wm)
    return first_compatible_numpy(vm, wm)
