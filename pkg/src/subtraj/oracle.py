"""Brute-force ground truth and effectiveness metrics.

The ranking here evaluates every subtrajectory with the whole-pair distance
independently, sharing nothing with the search engines beyond the cost
model itself.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .cma import SearchResult
from .core import SubtrajRange
from .costs import CostModel, full_distance
from .exceptions import BudgetExceeded, PairMismatch

__all__ = ["RankedSubtrajectories", "Quality", "brute_force_all", "quality_metrics", "DEFAULT_BUDGET"]

DEFAULT_BUDGET = 50_000
BUDGET_ENV = "SUBTRAJ_BUDGET"
# relative tolerance when matching a found distance against the ranking
REL_TOL = 1e-9


@dataclass(frozen=True)
class RankedSubtrajectories:
    """Every subtrajectory of one data trajectory, ascending by distance
    (ties by start, then end)."""

    query_id: object
    data_id: object
    entries: tuple  # of (SubtrajRange, distance)

    def __len__(self):
        return len(self.entries)

    @property
    def head(self):
        return self.entries[0]


def _budget(budget):
    if budget is not None:
        return int(budget)
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    return DEFAULT_BUDGET


def brute_force_all(query, data, model: CostModel, budget=None) -> RankedSubtrajectories:
    """Rank all ``n(n+1)/2`` subtrajectories of ``data``.

    Parameters
    ----------
    budget : int, optional
        Maximum number of ranges to evaluate. Defaults to the
        ``SUBTRAJ_BUDGET`` environment variable, else 50,000.

    Raises
    ------
    BudgetExceeded
        When ``n(n+1)/2`` exceeds the budget; nothing is evaluated.
    """
    n = len(data)
    total = n * (n + 1) // 2
    limit = _budget(budget)
    if total > limit:
        raise BudgetExceeded(f"{total} subtrajectories exceed the budget of {limit}")
    entries = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            entries.append((SubtrajRange(i, j), full_distance(query, data.sub(i, j), model)))
    entries.sort(key=lambda e: (e[1], e[0].start, e[0].end))
    return RankedSubtrajectories(query.id, data.id, tuple(entries))


@dataclass(frozen=True)
class Quality:
    ar: float
    mr: int
    rr: float


def _same(a, b):
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=0.0) or a == b


def quality_metrics(found: SearchResult, ranked: RankedSubtrajectories) -> Quality:
    """Approximate ratio, mean rank and relative rank of one answer.

    ``ar`` is found / best distance (1 when both are 0, ``inf`` when only
    the best is 0). ``mr`` is the 1-based rank of the first ranked entry
    whose distance equals the found one. ``rr`` is the fraction of entries
    strictly better than the found distance.
    """
    if found.data_id != ranked.data_id:
        raise PairMismatch(f"result for {found.data_id!r} checked against {ranked.data_id!r}")
    best = ranked.head[1]
    d = found.distance
    if best == 0:
        ar = 1.0 if d == 0 else math.inf
    else:
        ar = 1.0 if _same(d, best) else d / best
    better = 0
    mr = None
    for k, (_, v) in enumerate(ranked.entries):
        if _same(v, d):
            mr = k + 1
            break
        if v < d:
            better += 1
        else:
            # found value is not in the ranking (inexact algorithm); rank it
            # just after everything strictly better
            mr = k + 1
            break
    if mr is None:
        mr = len(ranked.entries) + 1
    return Quality(ar=ar, mr=mr, rr=better / len(ranked.entries))
