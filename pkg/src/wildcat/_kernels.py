"""Boolean-matrix kernels for order relations.

Each kernel has a numba implementation and a pure-numpy one.  The numba path
is used when numba imports cleanly and ``WILDCAT_DISABLE_NUMBA`` is unset (or
``0``).  Both paths take and return ``bool`` arrays of shape ``(n, n)``.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("WILDCAT_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by WILDCAT_DISABLE_NUMBA")
    from numba import njit
except ImportError:  # pragma: no cover - exercised via env flag in the benchmark
    njit = None

USE_NUMBA = njit is not None


# --- numpy ---------------------------------------------------------------

def closure_numpy(adj: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure (Warshall, row-vectorised)."""
    r = np.array(adj, dtype=bool, copy=True)
    np.fill_diagonal(r, True)
    for k in range(r.shape[0]):
        col = r[:, k]
        if col.any():
            r[col] |= r[k]
    return r


def reduction_numpy(leq: np.ndarray) -> np.ndarray:
    """Hasse (covering) edges of a closed relation."""
    strict = leq & ~np.eye(leq.shape[0], dtype=bool)
    two_step = (strict.astype(np.int32) @ strict.astype(np.int32)) > 0
    return strict & ~two_step


def order_defects_numpy(leq: np.ndarray) -> tuple[int, int, int]:
    """Counts of (non-reflexive nodes, antisymmetry breaks, transitivity breaks)."""
    n = leq.shape[0]
    refl = int(n - np.count_nonzero(np.diagonal(leq)))
    sym = leq & leq.T
    np.fill_diagonal(sym, False)
    anti = int(np.count_nonzero(sym)) // 2
    m = leq.astype(np.int32)
    trans = int(np.count_nonzero(((m @ m) > 0) & ~leq))
    return refl, anti, trans


# --- numba ---------------------------------------------------------------

if USE_NUMBA:

    @njit(cache=True)
    def _closure_nb(r):
        n = r.shape[0]
        for i in range(n):
            r[i, i] = True
        for k in range(n):
            for i in range(n):
                if r[i, k]:
                    for j in range(n):
                        if r[k, j]:
                            r[i, j] = True
        return r

    @njit(cache=True)
    def _reduction_nb(leq):
        n = leq.shape[0]
        out = np.zeros((n, n), dtype=np.bool_)
        for i in range(n):
            for j in range(n):
                if i == j or not leq[i, j]:
                    continue
                covered = True
                for k in range(n):
                    if k != i and k != j and leq[i, k] and leq[k, j]:
                        covered = False
                        break
                out[i, j] = covered
        return out

    @njit(cache=True)
    def _order_defects_nb(leq):
        n = leq.shape[0]
        refl = 0
        anti = 0
        trans = 0
        for i in range(n):
            if not leq[i, i]:
                refl += 1
            for j in range(i + 1, n):
                if leq[i, j] and leq[j, i]:
                    anti += 1
        for i in range(n):
            for j in range(n):
                if leq[i, j]:
                    continue
                for k in range(n):
                    if leq[i, k] and leq[k, j]:
                        trans += 1
                        break
        return refl, anti, trans

    def closure_numba(adj: np.ndarray) -> np.ndarray:
        return _closure_nb(np.array(adj, dtype=np.bool_, copy=True))

    def reduction_numba(leq: np.ndarray) -> np.ndarray:
        return _reduction_nb(np.ascontiguousarray(leq, dtype=np.bool_))

    def order_defects_numba(leq: np.ndarray) -> tuple[int, int, int]:
        r, a, t = _order_defects_nb(np.ascontiguousarray(leq, dtype=np.bool_))
        return int(r), int(a), int(t)

    closure = closure_numba
    reduction = reduction_numba
    order_defects = order_defects_numba
else:
    closure = closure_numpy
    reduction = reduction_numpy
    order_defects = order_defects_numpy
