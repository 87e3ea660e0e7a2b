"""Conversion-matching search: the exact O(mn) subtrajectory search.

``C[i, j]`` is the cheapest way to convert the query prefix ``q[1:i]`` into
some subtrajectory ending at ``d[j]`` with ``q[i]`` matched to ``d[j]``;
``S[i, j]`` is where that subtrajectory starts. The answer is the column
minimising the last row of ``C``.

Recurrences by family (1-based, ``i, j >= 2`` unless noted):

* edit:  ``C[i,j] = min(P[i,j] + sub(i,j), C[i-1,j] + del(i),
  del(q[1:i-1]) + sub(i,j))`` where
  ``P[i,j] = min(C[i-1,j-1], P[i,j-1] + ins(j-1))`` tracks the cheapest
  predecessor with the skipped data points inserted. The last term (start
  fresh at ``j`` after deleting the query prefix) also yields row 1 and
  column 1.
* warp:  ``C[i,j] = min(C[i-1,j-1], C[i,j-1], C[i-1,j]) + sub(i,j)``,
  row 1 is ``sub(1,j)``.
* fréchet: as warp with ``max`` in place of ``+``.

Among equal final costs the smallest end column wins, then the smallest
start. Remaining ties between branches prefer substitution, then insertion,
then deletion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .core import EmptyView, MatchingSequence, SubtrajRange
from .costs import CostModel, Family
from .exceptions import EmptyInput, FamilyUnsupported, IndexOutOfRange

__all__ = [
    "SearchResult",
    "CMatrix",
    "SMatrix",
    "cma_search",
    "cma_matrices",
    "reconstruct_matching",
]

# cells per substitution block in distance-only mode
_BLOCK_CELLS = 1 << 20


@dataclass(frozen=True)
class SearchResult:
    """Best subtrajectory of one data trajectory for one query."""

    data_id: object
    range: SubtrajRange
    distance: float

    @property
    def start(self):
        return self.range.start

    @property
    def end(self):
        return self.range.end

    def as_dict(self):
        return {
            "data_id": self.data_id,
            "start": self.range.start,
            "end": self.range.end,
            "distance": self.distance,
        }


@dataclass(frozen=True)
class CMatrix:
    """Partial matching costs; ``values[i-1, j-1]`` is ``C_{i,j}``."""

    values: np.ndarray

    @property
    def shape(self):
        return self.values.shape

    def at(self, i, j):
        return float(self.values[i - 1, j - 1])


@dataclass(frozen=True)
class SMatrix:
    """1-based start indices; ``values[i-1, j-1]`` is ``s_{i,j}``."""

    values: np.ndarray

    @property
    def shape(self):
        return self.values.shape

    def at(self, i, j):
        return int(self.values[i - 1, j - 1])


def _check_inputs(query, data, model):
    for t in (query, data):
        if isinstance(t, EmptyView) or len(t) == 0:
            raise EmptyInput("query and data must be nonempty")
    if not isinstance(model.family, Family):
        raise FamilyUnsupported(f"unsupported family {model.family!r}")
    model.check_pair(query, data)


def _run(query, data, model, keep):
    """Run the row recurrence. Returns the last row (costs, 0-based starts)
    and, when ``keep``, the full (C, S, branch, predecessor) tables."""
    m, n = len(query), len(data)
    C = np.zeros(n)
    St = np.zeros(n, dtype=np.int64)
    if keep:
        tables = (
            np.empty((m, n)),
            np.empty((m, n), dtype=np.int64),
            np.empty((m, n), dtype=np.int8),
            np.empty((m, n), dtype=np.int64),
        )
        step = m
    else:
        tables = (
            np.empty((0, 0)),
            np.empty((0, 0), dtype=np.int64),
            np.empty((0, 0), dtype=np.int8),
            np.empty((0, 0), dtype=np.int64),
        )
        step = max(1, _BLOCK_CELLS // n)

    if model.family is Family.EDIT:
        dq = model.del_vector(query)
        di = model.ins_vector(data)
        dbefore = np.concatenate(([0.0], np.cumsum(dq)[:-1]))
        for r0 in range(0, m, step):
            rows = slice(r0, min(m, r0 + step))
            S = model.sub_matrix(query, data, rows)
            K.cma_edit_rows(S, dq[rows], dbefore[rows], di, r0, C, St, keep, *tables)
    else:
        use_max = model.family is Family.FRECHET
        for r0 in range(0, m, step):
            S = model.sub_matrix(query, data, slice(r0, min(m, r0 + step)))
            K.cma_warp_rows(S, use_max, r0, C, St, keep, *tables)
    return C, St, (tables if keep else None)


def _frechet_start(query, data, model, end, delta):
    # A bottleneck further down can make a costlier prefix tie, so per-cell
    # start tracking may miss the earliest start; recover it by reachability.
    S = model.sub_matrix(query, data, slice(None))[:, : end + 1]
    R = K.frechet_reach(S, delta, end)
    return R, int(np.argmax(R[0]))


def _result(query, data, model, C, St):
    j = int(np.argmin(C))
    s = int(St[j])
    if model.family is Family.FRECHET:
        s = _frechet_start(query, data, model, j, C[j])[1]
    return SearchResult(data.id, SubtrajRange(s + 1, j + 1), float(C[j]))


def cma_search(query, data, model: CostModel) -> SearchResult:
    """Most similar subtrajectory of ``data`` to ``query`` under ``model``.

    Exact, O(mn) time and O(n) extra memory (substitution costs are
    computed in row blocks).

    Examples
    --------
    >>> from subtraj import make_trajectory, dtw
    >>> q = make_trajectory("q", [(0, 0), (1, 0)])
    >>> d = make_trajectory("d", [(5, 5), (0, 0), (1, 0), (9, 9)])
    >>> r = cma_search(q, d, dtw())
    >>> (r.start, r.end, r.distance)
    (2, 3, 0.0)
    """
    _check_inputs(query, data, model)
    C, St, _ = _run(query, data, model, keep=False)
    return _result(query, data, model, C, St)


def cma_matrices(query, data, model: CostModel):
    """Full ``(CMatrix, SMatrix)`` tables, O(mn) memory."""
    _check_inputs(query, data, model)
    _, _, (Ct, Stt, _, _) = _run(query, data, model, keep=True)
    return CMatrix(Ct), SMatrix(Stt + 1)


def reconstruct_matching(query, data, model: CostModel, end: int) -> MatchingSequence:
    """An optimal matching sequence among those with ``a_m = end``.

    Its conversion cost (without flanks) equals ``C_{m,end}``; for the
    optimal end column it starts at the reported subtrajectory start.
    """
    _check_inputs(query, data, model)
    n = len(data)
    if not 1 <= end <= n:
        raise IndexOutOfRange(f"end {end} outside [1, {n}]")
    _, _, (Ct, _, B, Kt) = _run(query, data, model, keep=True)
    m = len(query)
    a = [0] * m
    i, j = m - 1, end - 1
    if model.family is Family.FRECHET:
        # forward walk from the earliest start inside the reachable region
        # a_1 is pinned to the start, later rows take their last column;
        # columns skipped in between are absorbed at no extra bottleneck
        R, j = _frechet_start(query, data, model, end - 1, Ct[m - 1, end - 1])
        i = 0
        a[0] = j
        while (i, j) != (m - 1, end - 1):
            if i + 1 < m and j + 1 < end and R[i + 1, j + 1]:
                i, j = i + 1, j + 1
            elif j + 1 < end and R[i, j + 1]:
                j += 1
            else:
                i += 1
            if i > 0:
                a[i] = j
    elif model.family is Family.EDIT:
        while True:
            a[i] = j
            tag = B[i, j]
            if tag == K.START:
                for r in range(i):
                    a[r] = j
                break
            if tag != K.DEL:
                j = int(Kt[i, j])
            i -= 1
    else:
        # walk the warping path; each query point is matched to the last
        # column its row occupies on the path
        a[i] = j
        while i > 0:
            tag = B[i, j]
            if tag == K.SUB:
                i, j = i - 1, j - 1
                a[i] = j
            elif tag == K.INS:
                j -= 1
            else:
                i -= 1
                a[i] = j
    return MatchingSequence(v + 1 for v in a)
