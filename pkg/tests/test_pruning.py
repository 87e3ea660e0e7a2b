import numpy as np
import pytest

from subtraj import (
    EmptyDatabase,
    NonPositiveEpsilon,
    PruneConfig,
    SymbolicPointsUnsupported,
    build_grid,
    cma_search,
    dtw,
    edr,
    exact_s,
    frechet,
    gbp_close_count,
    generate,
    GeneratorSpec,
    Clustered,
    kpf_lower_bound,
    make_trajectory,
    search_database,
    select_key_points,
    top_k_search,
    wed_unit,
)
from subtraj.pruning import ESTIMATED, SAFE

from conftest import MODELS, random_pair


# ---------------------------------------------------------------- grid


def test_grid_single_point():
    g = build_grid(make_trajectory("q", [(0, 0)]), 1.0)
    assert g.cells == {(0, 0): frozenset({1})}


def test_grid_shared_cell():
    g = build_grid(make_trajectory("q", [(0.1, 0.1), (0.2, 0.9)]), 1.0)
    assert len(g.cells[(0, 0)]) == 2


def test_grid_adjacent_cells():
    q = make_trajectory("q", [(0.5, 0.5), (1.5, 0.5)])
    g = build_grid(q, 1.0)
    assert g.neighbourhood((0, 0)) == {1, 2} == g.neighbourhood((1, 0))


def test_grid_errors():
    with pytest.raises(SymbolicPointsUnsupported):
        build_grid(make_trajectory("q", ["a"]), 1.0)
    for bad in (0.0, -1.0):
        with pytest.raises(NonPositiveEpsilon):
            build_grid(make_trajectory("q", [(0, 0)]), bad)


def test_close_count_trivial():
    rng = np.random.default_rng(71)
    q = make_trajectory("q", rng.random((12, 2)))
    g = build_grid(q, 0.05)
    assert gbp_close_count(g, q) == 12
    assert gbp_close_count(g, make_trajectory("d", rng.random((5, 2)) + 100)) == 0
    with pytest.raises(SymbolicPointsUnsupported):
        gbp_close_count(g, make_trajectory("d", ["a"]))


def _naive_close(q, d, eps):
    cq = np.floor(q.coords / eps)
    cd = np.floor(d.coords / eps)
    return sum(any(np.abs(cq[i] - cd[j]).max() <= 1 for j in range(len(d))) for i in range(len(q)))


def test_close_count_matches_naive_predicate():
    ds = generate(GeneratorSpec(seed=4, count=40, length=(5, 30), model=Clustered(3, 2.0), bbox=(0, 0, 20, 20)))
    q = ds[0]
    for eps in (0.3, 1.0, 2.5):
        g = build_grid(q, eps)
        for d in ds:
            assert gbp_close_count(g, d) == _naive_close(q, d, eps)


def test_close_count_monotone_in_eps():
    rng = np.random.default_rng(72)
    for _ in range(20):
        q = make_trajectory("q", rng.random((10, 2)) * 10)
        d = make_trajectory("d", rng.random((15, 2)) * 10)
        counts = [gbp_close_count(build_grid(q, e), d) for e in (0.1, 0.5, 2.0, 8.0)]
        assert counts == sorted(counts)


# ---------------------------------------------------------- key points


@pytest.mark.parametrize(
    "m,r,expected",
    [(10, 0.5, [1, 3, 5, 7, 9]), (4, 1.0, [1, 2, 3, 4]), (1, 0.05, [1]), (10, 0.3, [1, 4, 7])],
)
def test_key_points(m, r, expected):
    assert select_key_points(m, r) == expected


def test_key_point_count_is_ceiling():
    assert len(select_key_points(7, 0.3)) == 3
    for m in range(1, 40):
        for r in (0.05, 0.1, 0.25, 0.5, 0.7, 1.0):
            keys = select_key_points(m, r)
            assert keys[0] == 1 and keys == sorted(set(keys)) and keys[-1] <= m


def test_key_points_rate_bounds():
    for bad in (0.0, 1.5, -0.1):
        with pytest.raises(ValueError):
            select_key_points(5, bad)


# ---------------------------------------------------------- lower bound


def test_lower_bound_r1_edit_formula():
    rng = np.random.default_rng(73)
    model = MODELS["erp"]()
    cfg = PruneConfig(rate=1.0)
    for _ in range(30):
        q, d = random_pair(rng, "erp", (1, 8), (1, 15))
        S = model.sub_matrix(q, d)
        expected = np.minimum(S.min(axis=1), model.del_vector(q)).sum()
        assert kpf_lower_bound(q, d, model, cfg) == pytest.approx(expected)


def test_lower_bound_self_is_zero():
    t = make_trajectory("t", list("abcab"))
    assert kpf_lower_bound(t, t, wed_unit(), PruneConfig(rate=1.0)) == 0


def test_lower_bound_admissible(model_name):
    rng = np.random.default_rng(74)
    model = MODELS[model_name]()
    for _ in range(60):
        q, d = random_pair(rng, model_name)
        for r in (0.1, 0.5, 1.0):
            lb = kpf_lower_bound(q, d, model, PruneConfig(rate=r))
            assert lb <= cma_search(q, d, model).distance + 1e-12


def test_estimated_scales_by_rate():
    rng = np.random.default_rng(75)
    q, d = random_pair(rng, "dtw", (10, 10), (20, 20))
    safe = kpf_lower_bound(q, d, dtw(), PruneConfig(rate=0.5))
    est = kpf_lower_bound(q, d, dtw(), PruneConfig(rate=0.5, kpf_mode=ESTIMATED))
    assert est == pytest.approx(safe / 0.5)


def test_frechet_bound_is_max():
    q = make_trajectory("q", [(0, 0), (0, 3)])
    d = make_trajectory("d", [(0, 1), (0, 2)])
    assert kpf_lower_bound(q, d, frechet(), PruneConfig(rate=1.0)) == 1.0


def test_config_validation():
    for kw in ({"mu": 1.5}, {"rate": 0.0}, {"kpf_mode": "fast"}, {"grid_eps": 0}):
        with pytest.raises((ValueError, NonPositiveEpsilon)):
            PruneConfig(**kw)
    cfg = PruneConfig()
    assert (cfg.mu, cfg.rate, cfg.kpf_mode, cfg.enable_gbp, cfg.enable_kpf) == (0.4, 0.05, SAFE, False, True)
    assert cfg.grid_eps == 0.8e-4


# ------------------------------------------------------------ pipeline


@pytest.fixture(scope="module")
def database():
    return generate(GeneratorSpec(seed=9, count=120, length=(20, 60), model=Clustered(4, 3.0),
                                  bbox=(0, 0, 50, 50))).trajectories


def _exhaustive(query, db, model):
    return sorted((cma_search(query, d, model).distance, k) for k, d in enumerate(db))


def test_self_clone_found():
    rng = np.random.default_rng(76)
    q = make_trajectory("q", [str(c) for c in rng.choice(list("abcd"), 8)])
    far = [make_trajectory(f"f{k}", list("xyz" * 3)) for k in range(9)]
    clone = q.with_id("clone")
    r = search_database(q, far[:4] + [clone] + far[4:], wed_unit())
    assert (r.data_id, r.distance) == ("clone", 0.0)


@pytest.mark.parametrize("model", [dtw(), edr(1.0), frechet()], ids=lambda m: m.name)
def test_safe_pipeline_is_exact(database, model):
    rng = np.random.default_rng(77)
    for _ in range(5):
        src = database[int(rng.integers(len(database)))]
        q = make_trajectory("q", src.coords[3:13] + rng.normal(0, 0.5, (10, 2)))
        exhaustive = _exhaustive(q, database, model)
        r, stats = search_database(q, database, model, PruneConfig(rate=0.2), return_stats=True)
        assert r.distance == exhaustive[0][0]
        assert stats.gbp_skipped == 0
        assert stats.kpf_skipped + stats.searched == len(database)
        off = search_database(q, database, model, PruneConfig(enable_kpf=False))
        assert off.distance == r.distance


def test_kpf_prunes_on_clustered_data(database):
    q = database[0].sub(5, 15).with_id("q")
    _, stats = search_database(q, database, dtw(), PruneConfig(rate=0.2), return_stats=True)
    assert stats.kpf_skipped > 0


def test_estimated_never_beats_optimum(database):
    rng = np.random.default_rng(78)
    cfg = PruneConfig(rate=0.1, kpf_mode=ESTIMATED, enable_gbp=True, grid_eps=1.0, mu=0.4)
    for _ in range(5):
        q = make_trajectory("q", rng.random((8, 2)) * 50)
        best = _exhaustive(q, database, dtw())[0][0]
        r = search_database(q, database, dtw(), cfg)
        assert r is None or r.distance >= best


def test_gbp_mu_monotone(database):
    q = database[3].sub(1, 10).with_id("q")
    searched = []
    for mu in (0.0, 0.3, 0.6, 1.0):
        cfg = PruneConfig(enable_gbp=True, enable_kpf=False, grid_eps=1.0, mu=mu)
        _, stats = search_database(q, database, dtw(), cfg, return_stats=True)
        searched.append(stats.searched)
    assert searched == sorted(searched, reverse=True)


def test_top_k(database):
    q = database[5].sub(2, 12).with_id("q")
    exhaustive = _exhaustive(q, database, dtw())
    for k in (1, 5, 10):
        res = top_k_search(q, database, dtw(), k, PruneConfig(rate=0.2))
        assert [r.distance for r in res] == [d for d, _ in exhaustive[:k]]
        assert len({r.data_id for r in res}) == k
    assert top_k_search(q, database, dtw(), 1)[0] == search_database(q, database, dtw())
    everything = top_k_search(q, database[:7], dtw(), 50, PruneConfig(enable_kpf=False))
    assert len(everything) == 7
    assert [r.distance for r in everything] == sorted(r.distance for r in everything)


def test_threads_agree(database):
    q = database[8].sub(4, 16).with_id("q")
    single = top_k_search(q, database, edr(1.0), 5, threads=1)
    multi = top_k_search(q, database, edr(1.0), 5, threads=4)
    assert [r.distance for r in single] == [r.distance for r in multi]


def test_pluggable_algo(database):
    q = database[2].sub(4, 10).with_id("q")
    a = search_database(q, database[:30], dtw(), algo=exact_s)
    b = search_database(q, database[:30], dtw())
    assert a.distance == pytest.approx(b.distance)


def test_empty_database():
    q = make_trajectory("q", [(0, 0)])
    with pytest.raises(EmptyDatabase):
        search_database(q, [], dtw())
    with pytest.raises(EmptyDatabase):
        top_k_search(q, [], dtw(), 3)
