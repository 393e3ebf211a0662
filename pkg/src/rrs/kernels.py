"""Hot numeric kernels: tree-edit-distance forest DP and LCS table.

Both kernels are written against numpy arrays so the same function body
runs compiled under numba or as plain Python. Set RRS_DISABLE_NUMBA=1 to
force the pure-Python path (used by the benchmark and by CI hosts where
JIT compilation is unwanted).
"""

from __future__ import annotations

import os

import numpy as np


def _ted_dp(lab1, lmd1, kr1, lab2, lmd2, kr2, ins_cost, del_cost, ren_cost):
    """Zhang-Shasha tree edit distance over postorder arrays.

    lab*: int64 label ids per postorder node; lmd*: leftmost-leaf-descendant
    postorder index per node; kr*: sorted keyroot postorder indices.
    Rename of equal labels costs 0, unequal costs ren_cost.
    """
    n1 = lab1.shape[0]
    n2 = lab2.shape[0]
    td = np.zeros((n1, n2), dtype=np.int64)
    for ki in range(kr1.shape[0]):
        i = kr1[ki]
        for kj in range(kr2.shape[0]):
            j = kr2[kj]
            m = i - lmd1[i] + 2
            n = j - lmd2[j] + 2
            fd = np.zeros((m, n), dtype=np.int64)
            ioff = lmd1[i] - 1
            joff = lmd2[j] - 1
            for x in range(1, m):
                fd[x, 0] = fd[x - 1, 0] + del_cost
            for y in range(1, n):
                fd[0, y] = fd[0, y - 1] + ins_cost
            for x in range(1, m):
                for y in range(1, n):
                    if lmd1[x + ioff] == lmd1[i] and lmd2[y + joff] == lmd2[j]:
                        ren = 0 if lab1[x + ioff] == lab2[y + joff] else ren_cost
                        best = fd[x - 1, y] + del_cost
                        cand = fd[x, y - 1] + ins_cost
                        if cand < best:
                            best = cand
                        cand = fd[x - 1, y - 1] + ren
                        if cand < best:
                            best = cand
                        fd[x, y] = best
                        td[x + ioff, y + joff] = best
                    else:
                        p = lmd1[x + ioff] - 1 - ioff
                        q = lmd2[y + joff] - 1 - joff
                        best = fd[x - 1, y] + del_cost
                        cand = fd[x, y - 1] + ins_cost
                        if cand < best:
                            best = cand
                        cand = fd[p, q] + td[x + ioff, y + joff]
                        if cand < best:
                            best = cand
                        fd[x, y] = best
    return td[n1 - 1, n2 - 1]


def _lcs_dp(a, b):
    """Length of the longest common subsequence of two int64 sequences."""
    n = a.shape[0]
    m = b.shape[0]
    prev = np.zeros(m + 1, dtype=np.int64)
    cur = np.zeros(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        ai = a[i - 1]
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            elif prev[j] >= cur[j - 1]:
                cur[j] = prev[j]
            else:
                cur[j] = cur[j - 1]
        prev, cur = cur, prev
    return prev[m]


def _numba_enabled() -> bool:
    if os.environ.get("RRS_DISABLE_NUMBA", "").lower() in ("1", "true", "yes"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_enabled()

if NUMBA_ENABLED:
    from numba import njit

    ted_dp = njit(cache=True)(_ted_dp)
    lcs_dp = njit(cache=True)(_lcs_dp)
else:
    ted_dp = _ted_dp
    lcs_dp = _lcs_dp

# uncompiled references, kept for the benchmark comparison
ted_dp_python = _ted_dp
lcs_dp_python = _lcs_dp
