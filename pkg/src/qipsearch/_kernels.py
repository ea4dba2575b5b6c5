"""Enumeration kernels over the 0/1 hypercube.

Each kernel has a numba ``@njit`` implementation and a pure-numpy fallback
with identical results.  Set ``QIPSEARCH_DISABLE_NUMBA=1`` to force the numpy
path (it is also used when numba cannot be imported).

All kernels take int64 data.  Callers are responsible for making sure no
partial sum can overflow (see :func:`fits_int64`).  Bit ``j`` of a leaf index
is variable ``j`` counted from the most significant end, so leaves are in
lexicographic order of ``(x_0, ..., x_{n-1})``.
"""

from __future__ import annotations

import os

import numpy as np

INT_INF = np.iinfo(np.int64).max
_SAFE = 1 << 62

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        return decorator


def numba_enabled() -> bool:
    flag = os.environ.get("QIPSEARCH_DISABLE_NUMBA", "").strip().lower()
    return NUMBA_AVAILABLE and flag not in ("1", "true", "yes", "on")


def fits_int64(*magnitudes: int) -> bool:
    return all(abs(v) < _SAFE for v in magnitudes)


_CHUNK_BITS = 16


def _bits(start: int, count: int, n: int) -> np.ndarray:
    idx = np.arange(start, start + count, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 1).astype(np.int64)


# ---------------------------------------------------------------------------
# leaf payoffs
# ---------------------------------------------------------------------------


@njit(cache=True)
def _leaf_values_numba(A, b, c, n):
    m = A.shape[0]
    total = 1 << n
    out = np.empty(total, dtype=np.int64)
    act = np.zeros(m, dtype=np.int64)
    x = np.zeros(n, dtype=np.int64)
    obj = 0
    # Gray-code walk: one variable flips per step.
    for step in range(total):
        if step > 0:
            low = step & -step
            bit = 0
            while (low >> bit) != 1:
                bit += 1
            j = n - 1 - bit
            delta = 1 - 2 * x[j]
            x[j] = 1 - x[j]
            obj += delta * c[j]
            for i in range(m):
                act[i] += delta * A[i, j]
        idx = 0
        for j in range(n):
            idx = (idx << 1) | x[j]
        feasible = True
        for i in range(m):
            if act[i] > b[i]:
                feasible = False
                break
        out[idx] = obj if feasible else INT_INF
    return out


def _leaf_values_numpy(A, b, c, n):
    total = 1 << n
    out = np.empty(total, dtype=np.int64)
    chunk = 1 << min(n, _CHUNK_BITS)
    for start in range(0, total, chunk):
        X = _bits(start, chunk, n)
        vals = X @ c
        if A.shape[0]:
            ok = np.all(X @ A.T <= b[None, :], axis=1)
            vals = np.where(ok, vals, INT_INF)
        out[start : start + chunk] = vals
    return out


def leaf_values(A: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Payoff of every total assignment (``INT_INF`` where ``Ax <= b`` fails)."""
    n = c.shape[0]
    A = np.ascontiguousarray(A, dtype=np.int64).reshape(-1, n)
    b = np.ascontiguousarray(b, dtype=np.int64)
    c = np.ascontiguousarray(c, dtype=np.int64)
    if numba_enabled():
        return _leaf_values_numba(A, b, c, n)
    return _leaf_values_numpy(A, b, c, n)


# ---------------------------------------------------------------------------
# minimax fold
# ---------------------------------------------------------------------------


@njit(cache=True)
def _fold_level_numba(vals, is_max):
    half = vals.shape[0] // 2
    out = np.empty(half, dtype=np.int64)
    for i in range(half):
        a = vals[2 * i]
        b = vals[2 * i + 1]
        if is_max:
            out[i] = a if a >= b else b
        else:
            out[i] = a if a <= b else b
    return out


def _fold_level_numpy(vals, is_max):
    pairs = vals.reshape(-1, 2)
    return pairs.max(axis=1) if is_max else pairs.min(axis=1)


def fold_minimax(leaves: np.ndarray, universal: np.ndarray) -> list[np.ndarray]:
    """Fold leaf payoffs into per-depth node values.

    Returns ``levels`` with ``levels[k]`` of length ``2**k`` holding the
    minimax value of every node at depth ``k``; ``levels[n]`` is ``leaves``.
    """
    n = len(universal)
    levels = [None] * (n + 1)
    levels[n] = leaves
    fold = _fold_level_numba if numba_enabled() else _fold_level_numpy
    cur = leaves
    for k in range(n - 1, -1, -1):
        cur = fold(cur, bool(universal[k]))
        levels[k] = cur
    return levels


# ---------------------------------------------------------------------------
# epigraph enumeration for scenario-expanded programs
# ---------------------------------------------------------------------------


@njit(cache=True)
def _min_epigraph_numba(A, b, C, d):
    n = A.shape[1]
    m = A.shape[0]
    s = C.shape[0]
    total = 1 << n
    act = np.zeros(m, dtype=np.int64)
    obj = d.copy()
    x = np.zeros(n, dtype=np.int64)
    best = INT_INF
    for step in range(total):
        if step > 0:
            low = step & -step
            j = 0
            while (low >> j) != 1:
                j += 1
            delta = 1 - 2 * x[j]
            x[j] = 1 - x[j]
            for i in range(m):
                act[i] += delta * A[i, j]
            for r in range(s):
                obj[r] += delta * C[r, j]
        feasible = True
        for i in range(m):
            if act[i] > b[i]:
                feasible = False
                break
        if feasible:
            t = obj[0]
            for r in range(1, s):
                if obj[r] > t:
                    t = obj[r]
            if t < best:
                best = t
    return best


def _min_epigraph_numpy(A, b, C, d):
    n = A.shape[1]
    total = 1 << n
    best = INT_INF
    chunk = 1 << min(n, _CHUNK_BITS)
    for start in range(0, total, chunk):
        X = _bits(start, min(chunk, total - start), n)
        ok = np.all(X @ A.T <= b[None, :], axis=1) if A.shape[0] else np.ones(len(X), bool)
        if not ok.any():
            continue
        t = (X[ok] @ C.T + d[None, :]).max(axis=1)
        best = min(best, int(t.min()))
    return best


def min_epigraph(A: np.ndarray, b: np.ndarray, C: np.ndarray, d: np.ndarray) -> int:
    """``min over x in {0,1}^n with Ax <= b of max_r (C x + d)_r``.

    Returns ``INT_INF`` if no binary point is feasible.  ``C`` must have at
    least one row.
    """
    n = A.shape[1] if A.ndim == 2 else C.shape[1]
    A = np.ascontiguousarray(A, dtype=np.int64).reshape(-1, n)
    b = np.ascontiguousarray(b, dtype=np.int64)
    C = np.ascontiguousarray(C, dtype=np.int64).reshape(-1, n)
    d = np.ascontiguousarray(d, dtype=np.int64)
    if C.shape[0] == 0:
        raise ValueError("at least one objective row is required")
    if numba_enabled():
        return int(_min_epigraph_numba(A, b, C, d))
    return int(_min_epigraph_numpy(A, b, C, d))
