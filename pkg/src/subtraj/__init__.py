"""Exact most-similar subtrajectory search."""

from .cma import CMatrix, SMatrix, SearchResult, cma_matrices, cma_search, reconstruct_matching
from .core import (
    EmptyView,
    MatchingSequence,
    Planar,
    SubtrajRange,
    Symbol,
    Trajectory,
    make_trajectory,
)
from .costs import (
    CostModel,
    Family,
    dtw,
    edr,
    erp,
    frechet,
    full_distance,
    parse_model,
    wed_custom,
    wed_unit,
)
from .baselines import exact_s, greedy_backtracking, spring
from .estimator import SubtrajectorySearch
from .exceptions import *  # noqa: F401,F403
from .io import Clustered, Dataset, GeneratorSpec, RandomWalk, generate, load_csv, save_csv
from .matching import conversion_costs, matching_cost
from .oracle import Quality, RankedSubtrajectories, brute_force_all, quality_metrics
from .pruning import (
    GridIndex,
    PruneConfig,
    PruneStats,
    build_grid,
    gbp_close_count,
    kpf_lower_bound,
    search_database,
    select_key_points,
    top_k_search,
)

__version__ = "0.1.0"
