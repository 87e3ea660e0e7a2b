import math

import numpy as np
import pytest

from subtraj import (
    BudgetExceeded,
    PairMismatch,
    SearchResult,
    SubtrajRange,
    brute_force_all,
    cma_search,
    exact_s,
    make_trajectory,
    quality_metrics,
    wed_unit,
)
from subtraj.oracle import RankedSubtrajectories

from conftest import MODELS, random_pair


def test_count_and_order():
    rng = np.random.default_rng(61)
    q, d = random_pair(rng, "dtw", (3, 3), (3, 3))
    ranked = brute_force_all(q, d, MODELS["dtw"]())
    assert len(ranked) == 6
    keys = [(v, r.start, r.end) for r, v in ranked.entries]
    assert keys == sorted(keys)


def test_self_query_head():
    t = make_trajectory("t", list("abca"))
    head = brute_force_all(t, t, wed_unit()).head
    assert head == (SubtrajRange(1, 4), 0.0)


def test_head_matches_engines(model_name):
    rng = np.random.default_rng(62)
    model = MODELS[model_name]()
    for _ in range(20):
        q, d = random_pair(rng, model_name, (2, 6), (2, 15))
        head = brute_force_all(q, d, model).head[1]
        assert cma_search(q, d, model).distance == pytest.approx(head, rel=1e-9)
        assert exact_s(q, d, model).distance == pytest.approx(head, rel=1e-9)


def test_budget(monkeypatch):
    t = make_trajectory("t", list("abcdefghij"))  # 55 ranges
    with pytest.raises(BudgetExceeded):
        brute_force_all(t, t, wed_unit(), budget=54)
    assert len(brute_force_all(t, t, wed_unit(), budget=55)) == 55
    monkeypatch.setenv("SUBTRAJ_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        brute_force_all(t, t, wed_unit())


def _ranked(values):
    # synthetic ranking with the given distances, already sorted
    entries = tuple((SubtrajRange(1, k + 1), v) for k, v in enumerate(values))
    return RankedSubtrajectories("q", "d", entries)


def _found(dist):
    return SearchResult("d", SubtrajRange(1, 1), dist)


def test_metrics_optimal():
    q = quality_metrics(_found(1.0), _ranked([1.0, 1.0, 2.0]))
    assert (q.ar, q.mr, q.rr) == (1.0, 1, 0.0)


def test_metrics_rr_definition():
    # strictly worse than exactly 9 of 45 entries
    values = [float(v) for v in range(9)] + [9.0] * 36
    q = quality_metrics(_found(9.0), _ranked(values))
    assert q.rr == pytest.approx(0.2)
    assert q.mr == 10
    assert math.isinf(q.ar)


def test_metrics_ratio():
    q = quality_metrics(_found(3.0), _ranked([2.0, 3.0, 3.0, 4.0]))
    assert (q.ar, q.mr, q.rr) == (1.5, 2, 0.25)


def test_metrics_zero_head():
    assert quality_metrics(_found(0.0), _ranked([0.0, 1.0])).ar == 1.0
    assert math.isinf(quality_metrics(_found(1.0), _ranked([0.0, 1.0])).ar)


def test_metrics_value_not_in_ranking():
    q = quality_metrics(_found(2.5), _ranked([1.0, 2.0, 3.0, 4.0]))
    assert (q.mr, q.rr) == (3, 0.5)


def test_metrics_truncated_search():
    # a search restricted to a prefix of the data, scored against the full
    # ranking, recomputed from the sorted list by hand
    rng = np.random.default_rng(63)
    model = MODELS["dtw"]()
    q, d = random_pair(rng, "dtw", (4, 4), (20, 20))
    ranked = brute_force_all(q, d, model)
    found = cma_search(q, d.sub(1, 8), model)
    dists = [v for _, v in ranked.entries]
    metrics = quality_metrics(found, ranked)
    assert metrics.rr == sum(v < found.distance for v in dists) / len(dists)
    assert metrics.mr == 1 + sum(v < found.distance for v in dists)
    assert metrics.ar == pytest.approx(found.distance / dists[0])
    assert (metrics.mr == 1) == (metrics.rr == 0)


def test_pair_mismatch():
    with pytest.raises(PairMismatch):
        quality_metrics(SearchResult("other", SubtrajRange(1, 1), 0.0), _ranked([0.0]))
