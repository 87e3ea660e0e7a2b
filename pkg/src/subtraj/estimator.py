"""scikit-learn style facade over the database search."""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .baselines import exact_s, greedy_backtracking, spring
from .cma import cma_search
from .core import EmptyView, Trajectory, make_trajectory
from .costs import CostModel, parse_model
from .pruning import PruneConfig, top_k_search

_ALGOS = {"cma": cma_search, "exacts": exact_s, "spring": spring, "gb": greedy_backtracking}


def _as_trajectory(x, default_id):
    if isinstance(x, (Trajectory, EmptyView)):
        return x
    return make_trajectory(default_id, x)


class SubtrajectorySearch(BaseEstimator):
    """Index a collection of data trajectories and query it for the most
    similar subtrajectories.

    Parameters
    ----------
    model : str or CostModel, default "dtw"
        Distance function, either a model object or its CLI name.
    algo : {"cma", "exacts", "spring", "gb"}, default "cma"
    kpf_mode : {"safe", "estimated"}, default "safe"
    rate, mu, grid_eps : float
        Key-point sampling rate, grid threshold and grid cell side.
    enable_gbp, enable_kpf : bool
        Pipeline switches; the defaults keep results exact.
    n_jobs : int, default 1
        Worker threads for the database scan.

    Examples
    --------
    >>> import numpy as np
    >>> est = SubtrajectorySearch(model="dtw").fit([np.array([[0, 0], [1, 0], [2, 0]])])
    >>> est.search(np.array([[1, 0], [2, 0]])).distance
    0.0
    """

    def __init__(self, model="dtw", algo="cma", kpf_mode="safe", rate=0.05, mu=0.4,
                 grid_eps=0.8e-4, enable_gbp=False, enable_kpf=True, n_jobs=1):
        self.model = model
        self.algo = algo
        self.kpf_mode = kpf_mode
        self.rate = rate
        self.mu = mu
        self.grid_eps = grid_eps
        self.enable_gbp = enable_gbp
        self.enable_kpf = enable_kpf
        self.n_jobs = n_jobs

    def _model(self):
        return self.model if isinstance(self.model, CostModel) else parse_model(self.model)

    def _config(self):
        return PruneConfig(mu=self.mu, rate=self.rate, kpf_mode=self.kpf_mode,
                           enable_gbp=self.enable_gbp, enable_kpf=self.enable_kpf,
                           grid_eps=self.grid_eps)

    def fit(self, X, y=None):
        """Store the database. ``X`` holds trajectories or ``(n, 2)`` arrays;
        plain arrays get their position as id."""
        if self.algo not in _ALGOS:
            raise ValueError(f"unknown algo {self.algo!r}")
        self.model_ = self._model()
        self.config_ = self._config()
        self.database_ = [_as_trajectory(x, k) for k, x in enumerate(X)]
        self.n_trajectories_ = len(self.database_)
        return self

    def kneighbors(self, query, n_neighbors=1, return_stats=False):
        """The ``n_neighbors`` best per-trajectory results, ascending."""
        check_is_fitted(self, "database_")
        query = _as_trajectory(query, "query")
        return top_k_search(query, self.database_, self.model_, n_neighbors, self.config_,
                            algo=_ALGOS[self.algo], threads=self.n_jobs, return_stats=return_stats)

    def search(self, query):
        """Best subtrajectory over the whole database."""
        results = self.kneighbors(query, 1)
        return results[0] if results else None
