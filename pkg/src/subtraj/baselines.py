"""Reference searches the engine is checked and benchmarked against.

* :func:`exact_s`   one whole-pair DP per start anchor, O(m n^2), any family;
* :func:`spring`    subsequence DTW with a free start row, DTW only;
* :func:`greedy_backtracking`  best-first expansion for discrete Fréchet.
"""

from __future__ import annotations

import heapq

import numpy as np

from . import _kernels as K
from .cma import SearchResult, _check_inputs
from .core import SubtrajRange
from .costs import CostModel, Family
from .exceptions import WrongFamily

__all__ = ["exact_s", "spring", "greedy_backtracking"]


def exact_s(query, data, model: CostModel) -> SearchResult:
    """Exhaustive search over start anchors.

    For each start ``i`` one DP over ``data[i:n]`` yields the distance to
    every prefix ``data[i:j]`` at once. Ties go to the smallest end, then
    the smallest start.
    """
    _check_inputs(query, data, model)
    S = model.sub_matrix(query, data)
    if model.family is Family.EDIT:
        dist, s, e = K.exacts_edit(S, model.del_vector(query), model.ins_vector(data))
    else:
        dist, s, e = K.exacts_warp(S, model.family is Family.FRECHET)
    return SearchResult(data.id, SubtrajRange(int(s) + 1, int(e) + 1), float(dist))


def spring(query, data, model: CostModel) -> SearchResult:
    """Subsequence DTW: a virtual zero row lets a warping path start anywhere.

    Plain Python, kept structurally apart from the engine so the two can be
    compared.
    """
    if model.family is not Family.WARP:
        raise WrongFamily(f"spring supports DTW only, got {model.family.value}")
    _check_inputs(query, data, model)
    S = model.sub_matrix(query, data).tolist()
    m, n = len(S), len(S[0])
    # D[j] / B[j]: best cost and start of a path ending at (i, j)
    D = [0.0] * (n + 1)
    B = list(range(n + 1))
    D[0] = float("inf")
    for i in range(m):
        E = [float("inf")] * (n + 1)
        F = [0] * (n + 1)
        for j in range(1, n + 1):
            cands = ((D[j - 1], B[j - 1]), (E[j - 1], F[j - 1]), (D[j], B[j]))
            # row "-1" is all zeros: a path may begin at column j
            if i == 0:
                cands = ((0.0, j),)
            v, b = min(cands, key=lambda c: c[0])
            E[j] = v + S[i][j - 1]
            F[j] = b
        D, B = E, F
    j = min(range(1, n + 1), key=lambda c: D[c])
    return SearchResult(data.id, SubtrajRange(B[j], j), float(D[j]))


def greedy_backtracking(query, data, model: CostModel) -> SearchResult:
    """Best-first search for the discrete Fréchet optimum.

    Cells ``(i, j)`` of the query-by-data grid are popped in order of the
    bottleneck cost of the cheapest path reaching them; every cell in the
    first query row is a seed. The first popped cell in the last row is
    optimal, since bottleneck costs never decrease along a path. Its start
    belongs to the path that reached the cell first, which can be later than
    the earliest optimal start when bottlenecks tie.
    """
    if model.family is not Family.FRECHET:
        raise WrongFamily(f"greedy backtracking supports Fréchet only, got {model.family.value}")
    _check_inputs(query, data, model)
    S = model.sub_matrix(query, data)
    m, n = S.shape
    seen = np.zeros((m, n), dtype=bool)
    # (cost, end, start, i): ties resolve towards small end then small start
    heap = [(float(S[0, j]), j, j, 0) for j in range(n)]
    heapq.heapify(heap)
    while heap:
        cost, j, s, i = heapq.heappop(heap)
        if seen[i, j]:
            continue
        seen[i, j] = True
        if i == m - 1:
            return SearchResult(data.id, SubtrajRange(s + 1, j + 1), cost)
        for di, dj in ((1, 1), (0, 1), (1, 0)):
            a, b = i + di, j + dj
            if a < m and b < n and not seen[a, b]:
                heapq.heappush(heap, (max(cost, float(S[a, b])), b, s, a))
    raise AssertionError("unreachable: the last row is always reachable")
