from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tecsp.corpus import complete, cpci_graph, cycle, path, random_2ec_graph, two_triangles_bridge
from tecsp.graph import Graph, delta, edge_set_is_2ec, is_two_edge_connected
from tecsp.inequalities import Family, make_asymmetric, make_connectivity
from tecsp.instances import Complete, InstanceSpec, SparsifiedKnn, generate
from tecsp.oracle import enumerate_2ec
from tecsp.rng import Xoshiro256
from tecsp.solver import (
    VARIANTS,
    CutPool,
    LpModel,
    Model,
    ModelConfig,
    SeparationMode,
    Status,
    _ComponentSolver,
    _Deadline,
    cut_pool_insert,
    lp_solve,
    preprocess,
    root_bounds,
    solve,
)


def brute_optimum(g, w):
    vs = enumerate_2ec(g)
    return int((vs.vectors.astype(np.int64) @ np.asarray(w, dtype=np.int64)).max())


def cfg(model, sep, **kw):
    return ModelConfig(model=model, separation=sep, **kw)


# ---------------------------------------------------------------- configuration


@pytest.mark.parametrize(
    "kw",
    [
        {"time_limit": 0},
        {"cut_cap_per_round": 0},
        {"feasibility_tol": 0},
        {"integrality_tol": -1},
        {"violation_tol": 0},
        {"seed": -1},
        {"seed": 1 << 64},
    ],
)
def test_config_rejects_bad_values(kw):
    with pytest.raises(ValueError):
        ModelConfig(**kw)


def test_config_defaults():
    c = ModelConfig()
    assert c.cut_cap_per_round == 20 and c.time_limit == 600
    assert (c.feasibility_tol, c.integrality_tol, c.violation_tol) == (1e-9, 1e-6, 1e-6)
    assert len(VARIANTS) == 4


# ---------------------------------------------------------------- preprocessing


def test_preprocess_examples():
    tb = two_triangles_bridge()
    parts = preprocess(tb.graph, [1] * tb.graph.m)
    assert len(parts) == 2 and all(h.m == 3 and h.n == 3 for h, _, _ in parts)
    assert sorted(e for _, _, back in parts for e in back) == [0, 1, 2, 3, 4, 5]
    k4 = complete(4)
    [(h, w, back)] = preprocess(k4, list(range(6)))
    assert h == k4 and w == list(range(6)) and back == list(range(6))
    assert preprocess(path(5), [1] * 4) == []


def test_preprocess_repeats_bridge_deletion():
    # pendant path hanging from a triangle: all path edges are bridges
    g = Graph(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)])
    parts = preprocess(g, [1] * g.m)
    assert len(parts) == 1 and parts[0][0].m == 3
    for h, _, _ in parts:
        assert is_two_edge_connected(h)


# ---------------------------------------------------------------- cut pool and LP


def test_cut_pool_dedup():
    g = cycle(4)
    pool = CutPool(g.m)
    a = make_asymmetric(g, delta(g, {0}), 0)
    same = make_asymmetric(g, delta(g, {1, 2, 3}), 0)
    assert cut_pool_insert(pool, a)
    assert not cut_pool_insert(pool, a)
    assert not cut_pool_insert(pool, same)
    b = make_asymmetric(g, delta(g, {0}), max(delta(g, {0}).cut_edges))
    assert cut_pool_insert(pool, b)
    assert len(pool) == 2 and pool.A.shape == (2, 4)


def test_cut_pool_grows_past_initial_capacity():
    g = complete(6)
    pool = CutPool(g.m)
    added = 0
    for v in range(6):
        cut = delta(g, {v})
        for e in cut.cut_edges:
            added += pool.insert(make_asymmetric(g, cut, e))
    assert added == len(pool) == 30
    assert pool.b.shape == (30,)


def test_lp_solve_activates_violated_rows_lazily():
    g = complete(4)
    pool = CutPool(g.m)
    cut = delta(g, {0, 1})
    e1, e2 = g.edge_id(0, 1), g.edge_id(2, 3)
    pool.insert(make_connectivity(g, cut, e1, e2))
    w = [1] * 6
    w[e1] = w[e2] = 5
    for e in cut.cut_edges:
        w[e] = -1
    model = LpModel(w, pool, np.zeros(6), np.ones(6), np.zeros(1, dtype=bool))
    res = lp_solve(model)
    assert model.active.all()
    assert (pool.A @ res.x <= pool.b + 1e-9).all()
    assert res.value == pytest.approx(8)  # x = 1 with two cut edges paid


def test_lp_solve_detects_infeasible_fixings():
    g = cycle(4)
    pool = CutPool(g.m)
    cut = delta(g, {0})
    e, f = sorted(cut.cut_edges)
    pool.insert(make_asymmetric(g, cut, e))
    lo, hi = np.zeros(4), np.ones(4)
    lo[e] = 1
    hi[f] = 0
    assert lp_solve(LpModel([1] * 4, pool, lo, hi)).status == "infeasible"


# ---------------------------------------------------------------- solve examples


@pytest.mark.parametrize("model, sep", VARIANTS)
def test_cycle_examples(model, sep):
    assert solve(cycle(5), [1] * 5, cfg(model, sep)).objective == 5
    assert solve(cycle(5), [-2, 1, 1, 1, 1], cfg(model, sep)).objective == 2
    assert solve(cycle(5), [-3, 1, 1, 1, -1], cfg(model, sep)).objective == 0


@pytest.mark.parametrize("model, sep", VARIANTS)
def test_k4_seeded_weights_match_brute_force(model, sep):
    rng = Xoshiro256(2024)
    g = complete(4)
    w = [rng.randint(-5, 6) for _ in range(6)]
    rep = solve(g, w, cfg(model, sep))
    assert rep.objective == brute_optimum(g, w)
    assert rep.status is Status.OPTIMAL and rep.dual_bound == rep.objective


def test_tree_gives_empty_incumbent():
    rep = solve(path(4), [5, 5, 5])
    assert rep.objective == 0 and not rep.incumbent.edges and rep.status is Status.OPTIMAL


def test_bridge_is_never_chosen():
    tb = two_triangles_bridge()
    w = [1] * tb.graph.m
    w[tb.labels["bridge"]] = 10
    rep = solve(tb.graph, w)
    assert rep.objective == 3 and tb.labels["bridge"] not in rep.incumbent.edges


def test_solve_rejects_bad_weights():
    with pytest.raises(ValueError):
        solve(cycle(3), [1, 1])
    with pytest.raises(ValueError):
        solve(cycle(3), [1, 1.5, 1])


def test_odd_stars_installed_on_complete_graphs():
    rng = Xoshiro256(5)
    g = complete(5)
    w = [rng.randint(-10, 3) for _ in range(g.m)]
    rep = solve(g, w, cfg(Model.STRENGTHENED, SeparationMode.INTEGER))
    assert rep.stats.cuts[Family.ODD_STAR.value] == 60
    assert rep.objective == brute_optimum(g, w)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**40))
def test_variants_match_brute_force(seed):
    rng = Xoshiro256(seed)
    g = random_2ec_graph(rng, rng.randint(4, 9), extra=rng.randint(0, 4))
    w = [rng.randint(-5, 6) for _ in range(g.m)]
    best = brute_optimum(g, w)
    for model, sep in VARIANTS:
        rep = solve(g, w, cfg(model, sep))
        assert rep.objective == best
        assert edge_set_is_2ec(g, rep.incumbent.edges)
        assert sum(w[e] for e in rep.incumbent.edges) == rep.objective


def test_cut_cap_limits_rows_per_round():
    g = complete(6)
    w = [1] * g.m
    solver = _ComponentSolver(g, w, cfg(Model.BASIC, SeparationMode.FRACTIONAL, cut_cap_per_round=1),
                              _Deadline(60))
    x = [1.0 if e < 5 else 0.0 for e in range(g.m)]
    assert solver._add_rows(solver._separate(x)) <= 2


def test_heuristic_connectivity_flag_keeps_optimum():
    rng = Xoshiro256(77)
    g = random_2ec_graph(rng, 8, extra=3)
    w = [rng.randint(-5, 6) for _ in range(g.m)]
    rep = solve(g, w, cfg(Model.BASIC, SeparationMode.FRACTIONAL, heuristic_connectivity=True))
    assert rep.objective == brute_optimum(g, w)


# ---------------------------------------------------------------- bounds


def _cpci_weights():
    cp = cpci_graph()
    cls = {cp.labels[k] for k in ("f1", "f2", "f3")}
    return cp.graph, cp.labels, cls, [-2 if e in cls else 1 for e in range(cp.graph.m)]


def test_root_bounds_monotone_on_cpci():
    g, _, _, w = _cpci_weights()
    basic = root_bounds(g, w, cfg(Model.BASIC, SeparationMode.FRACTIONAL), 6)
    strong = root_bounds(g, w, cfg(Model.STRENGTHENED, SeparationMode.FRACTIONAL), 6)
    rounds = max(len(basic), len(strong))
    pad = lambda t: t + [t[-1]] * (rounds - len(t))  # noqa: E731
    for b, s in zip(pad(basic), pad(strong)):
        assert s <= b + 1e-9
    assert strong[-1] < basic[-1]
    assert basic[-1] == pytest.approx(4.5)


def test_strengthened_root_cuts_off_documented_point():
    g, _, cls, w = _cpci_weights()
    c = cfg(Model.STRENGTHENED, SeparationMode.FRACTIONAL)
    solver = _ComponentSolver(g, w, c, _Deadline(60))
    y = [0.0 if e in cls else 0.5 for e in range(g.m)]
    solver._add_rows(solver._separate(y))
    cop = [r for r in solver.pool.rows if r.family is Family.COPARALLEL]
    assert cop and max(r.violation([F(v) for v in y]) for r in cop) == F(1, 2)
    rep = solve(g, w, c)
    assert rep.stats.cuts[Family.COPARALLEL.value] > 0 and rep.objective == 3


def test_time_limit_is_sound():
    g, w = generate(InstanceSpec(SparsifiedKnn(60, 4, 0.8), seed=3))
    rep = solve(g, w, cfg(Model.BASIC, SeparationMode.INTEGER, time_limit=0.05))
    assert rep.status is Status.TIME_LIMIT
    assert edge_set_is_2ec(g, rep.incumbent.edges)
    assert rep.objective <= rep.dual_bound
    assert rep.dual_bound <= sum(max(v, 0) for v in w)


def test_optimal_status_closes_the_gap():
    g, w = generate(InstanceSpec(Complete(6), seed=11))
    rep = solve(g, w, cfg(Model.STRENGTHENED, SeparationMode.FRACTIONAL))
    assert rep.status is Status.OPTIMAL and rep.dual_bound == rep.objective
    assert rep.stats.nodes >= 1 and rep.stats.lp_solves >= 1
