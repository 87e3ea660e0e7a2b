"""Database-scale search with grid pruning (GBP) and key-point filtering (KPF).

Per data trajectory the pipeline

1. (GBP) counts query points lying in the 3x3 grid neighbourhood of some
   data point and skips the trajectory when fewer than ``mu * m`` do;
2. (KPF) computes a cheap lower bound from sampled query points and skips
   the trajectory when it cannot beat the current best (or K-th best);
3. otherwise runs the exact single-pair search.

GBP is a heuristic and is off by default. KPF in ``"safe"`` mode never
prunes an optimum; ``"estimated"`` mode scales the key-point sum by
``1 / rate`` and can.
"""

from __future__ import annotations

import heapq
import math
import threading
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .cma import SearchResult, cma_search
from .core import PLANAR
from .costs import CostModel, Family
from .exceptions import EmptyDatabase, NonPositiveEpsilon, SymbolicPointsUnsupported

__all__ = [
    "GridIndex",
    "PruneConfig",
    "PruneStats",
    "SAFE",
    "ESTIMATED",
    "build_grid",
    "gbp_close_count",
    "select_key_points",
    "kpf_lower_bound",
    "search_database",
    "top_k_search",
]

SAFE = "safe"
ESTIMATED = "estimated"

_NEIGHBOURS = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)]


@dataclass(frozen=True)
class GridIndex:
    """Query points bucketed into square cells of side ``epsilon``.

    ``cells`` maps ``(floor(x / eps), floor(y / eps))`` to the 1-based query
    indices in that cell.
    """

    epsilon: float
    cells: dict
    m: int

    def neighbourhood(self, cell):
        cx, cy = cell
        out = set()
        for dx, dy in _NEIGHBOURS:
            out.update(self.cells.get((cx + dx, cy + dy), ()))
        return out


def _check_eps(epsilon):
    epsilon = float(epsilon)
    if not epsilon > 0 or not math.isfinite(epsilon):
        raise NonPositiveEpsilon(f"grid epsilon must be positive, got {epsilon}")
    return epsilon


def _cells_of(traj, epsilon):
    if traj.kind != PLANAR:
        raise SymbolicPointsUnsupported("grid pruning needs planar points")
    return np.floor(traj.coords / epsilon).astype(np.int64)


def build_grid(query, epsilon) -> GridIndex:
    epsilon = _check_eps(epsilon)
    cells = defaultdict(set)
    for idx, (cx, cy) in enumerate(_cells_of(query, epsilon), start=1):
        cells[(int(cx), int(cy))].add(idx)
    return GridIndex(epsilon, {k: frozenset(v) for k, v in cells.items()}, len(query))


def gbp_close_count(grid: GridIndex, data) -> int:
    """Number of distinct query points in the 3x3 neighbourhood of at least
    one data point."""
    cells = _cells_of(data, grid.epsilon)
    close = set()
    for cx, cy in np.unique(cells, axis=0):
        close |= grid.neighbourhood((int(cx), int(cy)))
        if len(close) == grid.m:
            break
    return len(close)


def select_key_points(query, rate) -> list:
    """``ceil(rate * m)`` evenly strided 1-based indices, starting at 1."""
    m = query if isinstance(query, int) else len(query)
    rate = float(rate)
    if not 0 < rate <= 1:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    # round first so 0.3 * 10 does not ceil to 4
    k = max(1, math.ceil(round(rate * m, 9)))
    return [1 + (t * m) // k for t in range(k)]


@dataclass(frozen=True)
class PruneConfig:
    """Pipeline knobs.

    The defaults keep the search exact: GBP off, KPF on in safe mode.
    ``mu``, ``rate`` and ``grid_eps`` only matter once GBP or estimated KPF
    is switched on.
    """

    mu: float = 0.4
    rate: float = 0.05
    kpf_mode: str = SAFE
    enable_gbp: bool = False
    enable_kpf: bool = True
    grid_eps: float = 0.8e-4

    def __post_init__(self):
        if not 0 <= self.mu <= 1:
            raise ValueError(f"mu must lie in [0, 1], got {self.mu}")
        if not 0 < self.rate <= 1:
            raise ValueError(f"rate must lie in (0, 1], got {self.rate}")
        if self.kpf_mode not in (SAFE, ESTIMATED):
            raise ValueError(f"kpf_mode must be 'safe' or 'estimated', got {self.kpf_mode!r}")
        _check_eps(self.grid_eps)

    def with_(self, **kw):
        return replace(self, **kw)


def kpf_lower_bound(query, data, model: CostModel, config: PruneConfig = PruneConfig()) -> float:
    """Lower bound (safe mode) or estimate of the best subtrajectory distance.

    Each key query point must end up substituted (or, for edit models,
    deleted), so its cheapest option bounds its share of the cost. Sum
    aggregation adds the shares; Fréchet takes the largest.
    """
    keys = np.asarray(select_key_points(query, config.rate)) - 1
    # key rows only, against all of data
    S = np.vstack([model.sub_matrix(query, data, slice(k, k + 1)) for k in keys])
    per_point = S.min(axis=1)
    if model.family is Family.EDIT:
        per_point = np.minimum(per_point, model.del_vector(query)[keys])
    if model.family is Family.FRECHET:
        return float(per_point.max())
    total = float(per_point.sum())
    if config.kpf_mode == ESTIMATED:
        total /= config.rate
    return total


@dataclass
class PruneStats:
    gbp_skipped: int = 0
    kpf_skipped: int = 0
    searched: int = 0

    def as_dict(self):
        return {"gbp_skipped": self.gbp_skipped, "kpf_skipped": self.kpf_skipped, "searched": self.searched}


class _TopK:
    """Thread-safe bounded max-heap of (distance, position) keyed results."""

    def __init__(self, k):
        self.k = k
        self._heap = []  # (-distance, -position, result)
        self._lock = threading.Lock()
        self.stats = PruneStats()

    def threshold(self):
        # the value can be stale by the time it is used; that only weakens
        # pruning since the threshold never increases
        with self._lock:
            if len(self._heap) < self.k:
                return math.inf
            return -self._heap[0][0]

    def offer(self, pos, result):
        item = (-result.distance, -pos, result)
        with self._lock:
            if len(self._heap) < self.k:
                heapq.heappush(self._heap, item)
            elif item > self._heap[0]:
                heapq.heapreplace(self._heap, item)

    def count(self, field):
        with self._lock:
            setattr(self.stats, field, getattr(self.stats, field) + 1)

    def results(self):
        return [r for _, _, r in sorted(self._heap, key=lambda t: (-t[0], -t[1]))]


def _process(pos, data, query, model, config, grid, algo, acc):
    if grid is not None and gbp_close_count(grid, data) < config.mu * len(query):
        acc.count("gbp_skipped")
        return
    if config.enable_kpf and kpf_lower_bound(query, data, model, config) >= acc.threshold():
        acc.count("kpf_skipped")
        return
    acc.count("searched")
    acc.offer(pos, algo(query, data, model))


def _run(query, trajectories, model, k, config, algo, threads):
    trajectories = list(trajectories)
    if not trajectories:
        raise EmptyDatabase("the database holds no trajectories")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    config = config or PruneConfig()
    grid = build_grid(query, config.grid_eps) if config.enable_gbp else None
    acc = _TopK(k)
    if threads is None or threads <= 1:
        for pos, data in enumerate(trajectories):
            _process(pos, data, query, model, config, grid, algo, acc)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_process, pos, data, query, model, config, grid, algo, acc)
                for pos, data in enumerate(trajectories)
            ]
            for f in futures:
                f.result()
    return acc.results(), acc.stats


def search_database(query, trajectories, model, config=None, *, algo=cma_search, threads=1,
                    return_stats=False):
    """Best subtrajectory over a collection of data trajectories.

    Returns ``None`` only when GBP prunes every trajectory. With
    ``return_stats`` a :class:`PruneStats` is returned alongside.
    """
    results, stats = _run(query, trajectories, model, 1, config, algo, threads)
    best = results[0] if results else None
    return (best, stats) if return_stats else best


def top_k_search(query, trajectories, model, k, config=None, *, algo=cma_search, threads=1,
                 return_stats=False):
    """The ``k`` best per-trajectory results, ascending by distance."""
    results, stats = _run(query, trajectories, model, k, config, algo, threads)
    return (results, stats) if return_stats else results
