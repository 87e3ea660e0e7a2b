"""Numba kernels.

All kernels take precomputed cost arrays, never callbacks:

* ``S``  substitution costs, shape ``(rows, n)``
* ``dq`` per-query-point deletion costs
* ``di`` per-data-point insertion costs

Three independent groups live here and share no code: whole-pair
distances (``*_full``), the per-anchor ExactS loops (``exacts_*``) and the
CMA row recurrences (``cma_*_rows``).
"""

import math

import numpy as np
from numba import njit

INF = np.inf

# branch tags stored per cell when tables are kept
START = 0
SUB = 1
INS = 2
DEL = 3


# ---------------------------------------------------------------------------
# cost blocks


@njit(cache=True, nogil=True)
def euclid_block(qc, dc):
    rows, n = qc.shape[0], dc.shape[0]
    out = np.empty((rows, n))
    for r in range(rows):
        x, y = qc[r, 0], qc[r, 1]
        for j in range(n):
            dx = x - dc[j, 0]
            dy = y - dc[j, 1]
            out[r, j] = math.sqrt(dx * dx + dy * dy)
    return out


# ---------------------------------------------------------------------------
# whole-pair distances


@njit(cache=True, nogil=True)
def edit_full(S, dq, di):
    m, n = S.shape
    D = np.empty((m + 1, n + 1))
    D[0, 0] = 0.0
    for i in range(1, m + 1):
        D[i, 0] = D[i - 1, 0] + dq[i - 1]
    for j in range(1, n + 1):
        D[0, j] = D[0, j - 1] + di[j - 1]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            v = D[i - 1, j - 1] + S[i - 1, j - 1]
            w = D[i, j - 1] + di[j - 1]
            if w < v:
                v = w
            w = D[i - 1, j] + dq[i - 1]
            if w < v:
                v = w
            D[i, j] = v
    return D[m, n]


@njit(cache=True, nogil=True)
def warp_full(S):
    m, n = S.shape
    D = np.empty((m, n))
    D[0, 0] = S[0, 0]
    for j in range(1, n):
        D[0, j] = D[0, j - 1] + S[0, j]
    for i in range(1, m):
        D[i, 0] = D[i - 1, 0] + S[i, 0]
        for j in range(1, n):
            v = D[i - 1, j - 1]
            if D[i - 1, j] < v:
                v = D[i - 1, j]
            if D[i, j - 1] < v:
                v = D[i, j - 1]
            D[i, j] = v + S[i, j]
    return D[m - 1, n - 1]


@njit(cache=True, nogil=True)
def frechet_full(S):
    m, n = S.shape
    D = np.empty((m, n))
    D[0, 0] = S[0, 0]
    for j in range(1, n):
        D[0, j] = max(D[0, j - 1], S[0, j])
    for i in range(1, m):
        D[i, 0] = max(D[i - 1, 0], S[i, 0])
        for j in range(1, n):
            v = D[i - 1, j - 1]
            if D[i - 1, j] < v:
                v = D[i - 1, j]
            if D[i, j - 1] < v:
                v = D[i, j - 1]
            D[i, j] = max(v, S[i, j])
    return D[m - 1, n - 1]


# ---------------------------------------------------------------------------
# ExactS: one raw DP per anchor, O(m n^2)


@njit(cache=True, nogil=True)
def _better(d, e, s, bd, be, bs):
    if d < bd:
        return True
    if d == bd and (e < be or (e == be and s < bs)):
        return True
    return False


@njit(cache=True, nogil=True)
def exacts_edit(S, dq, di):
    m, n = S.shape
    bd, be, bs = INF, n, n
    prev = np.empty(n + 1)
    cur = np.empty(n + 1)
    for a in range(n):
        L = n - a
        prev[0] = 0.0
        for y in range(1, L + 1):
            prev[y] = prev[y - 1] + di[a + y - 1]
        for i in range(1, m + 1):
            cur[0] = prev[0] + dq[i - 1]
            for y in range(1, L + 1):
                v = prev[y - 1] + S[i - 1, a + y - 1]
                w = cur[y - 1] + di[a + y - 1]
                if w < v:
                    v = w
                w = prev[y] + dq[i - 1]
                if w < v:
                    v = w
                cur[y] = v
            for y in range(L + 1):
                prev[y] = cur[y]
        for y in range(1, L + 1):
            if _better(prev[y], a + y - 1, a, bd, be, bs):
                bd, be, bs = prev[y], a + y - 1, a
    return bd, bs, be


@njit(cache=True, nogil=True)
def exacts_warp(S, use_max):
    m, n = S.shape
    bd, be, bs = INF, n, n
    prev = np.empty(n)
    cur = np.empty(n)
    for a in range(n):
        L = n - a
        prev[0] = S[0, a]
        for y in range(1, L):
            if use_max:
                prev[y] = max(prev[y - 1], S[0, a + y])
            else:
                prev[y] = prev[y - 1] + S[0, a + y]
        for i in range(1, m):
            if use_max:
                cur[0] = max(prev[0], S[i, a])
            else:
                cur[0] = prev[0] + S[i, a]
            for y in range(1, L):
                v = prev[y - 1]
                if prev[y] < v:
                    v = prev[y]
                if cur[y - 1] < v:
                    v = cur[y - 1]
                if use_max:
                    cur[y] = max(v, S[i, a + y])
                else:
                    cur[y] = v + S[i, a + y]
            for y in range(L):
                prev[y] = cur[y]
        for y in range(L):
            if _better(prev[y], a + y, a, bd, be, bs):
                bd, be, bs = prev[y], a + y, a
    return bd, bs, be


# ---------------------------------------------------------------------------
# CMA rows
#
# Each call advances the DP over a block of query rows starting at global row
# ``row0``. ``C`` / ``St`` hold the previous row on entry and the last row of
# the block on exit. When ``keep`` is set, full tables are written to
# ``Ct`` (costs), ``Stt`` (starts), ``Bt`` (branch tag) and ``Kt``
# (predecessor column in the row above). Candidates rank on (cost, start) so
# every cell keeps the earliest start among its optimal paths; exact ties
# fall back to substitution, insertion, deletion.


@njit(cache=True, nogil=True)
def _lex(v, s, bv, bs):
    # strictly better on (cost, start)
    return v < bv or (v == bv and s < bs)


@njit(cache=True, nogil=True)
def cma_edit_rows(S, dq, dbefore, di, row0, C, St, keep, Ct, Stt, Bt, Kt):
    rows, n = S.shape
    Cn = np.empty(n)
    Sn = np.empty(n, dtype=np.int64)
    for r in range(rows):
        gi = row0 + r
        if gi == 0:
            for j in range(n):
                Cn[j] = S[r, j]
                Sn[j] = j
                if keep:
                    Bt[gi, j] = START
                    Kt[gi, j] = -1
        else:
            P = INF
            Ps = n
            Pk = -1
            Ptag = SUB
            for j in range(n):
                if j > 0:
                    left = P + di[j - 1]
                    if _lex(left, Ps, C[j - 1], St[j - 1]):
                        P = left
                        Ptag = INS
                    else:
                        P = C[j - 1]
                        Ps = St[j - 1]
                        Pk = j - 1
                        Ptag = SUB
                s = S[r, j]
                best = P + s
                bs = Ps
                btag = Ptag
                bk = Pk
                if j == 0:
                    best = INF
                    bs = n
                v = C[j] + dq[r]
                if _lex(v, St[j], best, bs):
                    best = v
                    bs = St[j]
                    btag = DEL
                    bk = j
                v = dbefore[r] + s
                if _lex(v, j, best, bs):
                    best = v
                    bs = j
                    btag = START
                    bk = -1
                Cn[j] = best
                Sn[j] = bs
                if keep:
                    Bt[gi, j] = btag
                    Kt[gi, j] = bk
        for j in range(n):
            C[j] = Cn[j]
            St[j] = Sn[j]
            if keep:
                Ct[gi, j] = Cn[j]
                Stt[gi, j] = Sn[j]


@njit(cache=True, nogil=True)
def cma_warp_rows(S, use_max, row0, C, St, keep, Ct, Stt, Bt, Kt):
    rows, n = S.shape
    Cn = np.empty(n)
    Sn = np.empty(n, dtype=np.int64)
    for r in range(rows):
        gi = row0 + r
        if gi == 0:
            for j in range(n):
                Cn[j] = S[r, j]
                Sn[j] = j
                if keep:
                    Bt[gi, j] = START
                    Kt[gi, j] = -1
        else:
            for j in range(n):
                s = S[r, j]
                # candidates are compared on the cell value they would give
                if j == 0:
                    best = max(C[0], s) if use_max else C[0] + s
                    bs = St[0]
                    btag = DEL
                    bk = 0
                else:
                    best = max(C[j - 1], s) if use_max else C[j - 1] + s
                    bs = St[j - 1]
                    btag = SUB
                    bk = j - 1
                    v = max(Cn[j - 1], s) if use_max else Cn[j - 1] + s
                    if _lex(v, Sn[j - 1], best, bs):
                        best = v
                        bs = Sn[j - 1]
                        btag = INS
                    v = max(C[j], s) if use_max else C[j] + s
                    if _lex(v, St[j], best, bs):
                        best = v
                        bs = St[j]
                        btag = DEL
                        bk = j
                Cn[j] = best
                Sn[j] = bs
                if keep:
                    Bt[gi, j] = btag
                    Kt[gi, j] = bk
        for j in range(n):
            C[j] = Cn[j]
            St[j] = Sn[j]
            if keep:
                Ct[gi, j] = Cn[j]
                Stt[gi, j] = Sn[j]


@njit(cache=True, nogil=True)
def frechet_reach(S, delta, end):
    """Cells from which ``(m-1, end)`` is reachable by monotone steps through
    cells costing at most ``delta``."""
    m = S.shape[0]
    R = np.zeros((m, end + 1), dtype=np.bool_)
    for i in range(m - 1, -1, -1):
        for j in range(end, -1, -1):
            if S[i, j] > delta:
                continue
            if i == m - 1 and j == end:
                R[i, j] = True
            elif i + 1 < m and j + 1 <= end and R[i + 1, j + 1]:
                R[i, j] = True
            elif j + 1 <= end and R[i, j + 1]:
                R[i, j] = True
            elif i + 1 < m and R[i + 1, j]:
                R[i, j] = True
    return R
