import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import affine_rank_sympy, naive_2ec_vectors, sympy_rank
from tecsp.copar import dimension
from tecsp.corpus import (
    bowtie,
    cci_graph,
    complete,
    complete_minus_edge,
    cpci_graph,
    cycle,
    random_2ec_graph,
    two_triangles_bridge,
)
from tecsp.graph import Graph, delta
from tecsp.inequalities import Family, _row, make_asymmetric, make_box_upper, make_connectivity
from tecsp.oracle import (
    BudgetExceeded,
    affine_dimension,
    bareiss_rank,
    check_lattice_points,
    check_theorems,
    cut_table,
    degenerate_coparallel_rows,
    enumerate_2ec,
    face_report,
    lattice_report,
    predicate_connectivity_facet,
    predicate_delta_Wf,
    predicate_in_3cut,
    integer_row,
    row_values,
)
from tecsp.rng import Xoshiro256

seeds = st.integers(0, 2**40)


def _random(seed, lo=4, hi=9):
    rng = Xoshiro256(seed)
    return random_2ec_graph(rng, rng.randint(lo, hi), extra=rng.randint(0, 3))


# ---------------------------------------------------------------- enumeration


def test_k4_naive_oracle_first():
    assert len(naive_2ec_vectors(complete(4))) == 15


def test_enumeration_examples():
    assert enumerate_2ec(cycle(5)).as_set() == {(0,) * 5, (1,) * 5}
    k4 = enumerate_2ec(complete(4))
    assert len(k4) == 15
    sizes = sorted(sum(v) for v in k4.as_set())
    assert sizes == [0, 3, 3, 3, 3, 4, 4, 4, 5, 5, 5, 5, 5, 5, 6]
    assert len(enumerate_2ec(bowtie())) == 4


@pytest.mark.parametrize("method", ["dfs", "cuts"])
@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_enumeration_matches_naive_subsets(method, seed):
    g = _random(seed, 4, 8)
    if g.m > 14:
        g = _random(seed + 1, 4, 6)
    assert enumerate_2ec(g, method=method).as_set() == naive_2ec_vectors(g)


@pytest.mark.parametrize(
    "g", [cycle(5), complete(4), complete(5), bowtie(), cci_graph().graph, cpci_graph().graph]
)
def test_enumeration_routes_agree(g):
    assert enumerate_2ec(g, method="dfs").as_set() == enumerate_2ec(g, method="cuts").as_set()


def test_enumeration_vectors_are_distinct_and_include_zero():
    vs = enumerate_2ec(cpci_graph().graph)
    assert len(vs.as_set()) == len(vs)
    assert (0,) * vs.vectors.shape[1] in vs.as_set()


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_2ec(complete(4), budget=5)
    with pytest.raises(ValueError):
        enumerate_2ec(cycle(4), method="magic")


# ---------------------------------------------------------------- rank and dimension


def test_affine_dimension_examples():
    assert affine_dimension([[0, 0, 0]]) == 0
    assert affine_dimension(enumerate_2ec(cycle(5)).vectors) == 1
    assert affine_dimension(enumerate_2ec(complete(4)).vectors) == 6
    with pytest.raises(ValueError):
        affine_dimension(np.zeros((0, 3)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=6))
def test_bareiss_matches_sympy(rows):
    assert bareiss_rank(rows) == sympy_rank(rows)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), min_size=5, max_size=5), min_size=1, max_size=12))
def test_affine_dimension_matches_sympy(vectors):
    assert affine_dimension(vectors) == affine_rank_sympy(vectors)


def test_affine_dimension_large_entries_path():
    assert affine_dimension([[0, 0], [2, 0], [4, 0]]) == 1
    assert affine_dimension([[0, 0], [2, 0], [0, 3]]) == 2


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_dimension_theorem_on_random_graphs(seed):
    g = _random(seed)
    assert enumerate_2ec(g).dimension == dimension(g)


# ---------------------------------------------------------------- faces


def test_face_report_examples():
    k4 = complete(4)
    vs = enumerate_2ec(k4)
    assert face_report(vs, make_box_upper(k4, 0)).is_facet
    c4 = cycle(4)
    cvs = enumerate_2ec(c4)
    cut = delta(c4, {0})
    rep = face_report(cvs, make_asymmetric(c4, cut, min(cut.cut_edges)))
    assert rep.valid and len(rep.tight_vectors) == len(cvs) and not rep.is_facet
    total = _row({e: 1 for e in range(6)}, 0, Family.BOX_UPPER)
    rep = face_report(vs, total)
    assert len(rep.tight_vectors) == 1 and rep.face_dim == 0 and not rep.is_facet


def test_face_report_empty_face():
    k4 = complete(4)
    row = _row({0: 1}, -1, Family.BOX_UPPER)
    rep = face_report(enumerate_2ec(k4), row)
    assert rep.face_dim == -1 and not rep.is_facet and not rep.valid


def test_face_dim_subsample_matches_full_rank():
    g = complete(6)
    vs = enumerate_2ec(g)
    row = make_box_upper(g, 0)
    rep = face_report(vs, row)
    assert len(rep.tight_vectors) > 4096
    assert rep.face_dim == affine_dimension(vs.vectors[rep.tight_vectors])


def test_row_values_exact_against_integer_dot():
    g = cpci_graph().graph
    vs = enumerate_2ec(g)
    row = _row({0: 3, 4: -7, 11: 2}, 1, Family.BOX_UPPER)
    coeffs, _ = integer_row(row)
    expect = vs.vectors.astype(np.int64) @ np.array([coeffs.get(e, 0) for e in range(g.m)])
    assert np.array_equal(row_values(vs, coeffs), expect)


def test_integer_row_scaling():
    row = _row({0: 1, 1: -1}, "1/2", Family.ODD_STAR)
    assert integer_row(row) == ({0: 2, 1: -2}, 1)


# ---------------------------------------------------------------- lattice points


@pytest.mark.parametrize(
    "g", [complete(4), cycle(5), cci_graph().graph, complete_minus_edge(5)], ids=["K4", "C5", "cci", "K5-e"]
)
def test_lattice_points(g):
    rep = lattice_report(g)
    assert rep.ok and rep.feasible == rep.enumerated
    assert check_lattice_points(g)


def test_lattice_budget_and_precondition():
    with pytest.raises(BudgetExceeded):
        lattice_report(complete(7))
    with pytest.raises(ValueError):
        lattice_report(two_triangles_bridge().graph)


def test_cut_table_covers_each_cut_once():
    g = complete(5)
    table = cut_table(g)
    assert len(table) == 2 ** 4 - 1
    assert all(rec.minimal for rec in table)
    assert sorted(rec.size for rec in table) == [4] * 5 + [6] * 10


# ---------------------------------------------------------------- predicates


def test_in_3cut_examples():
    assert all(predicate_in_3cut(complete(4), e) for e in range(6))
    assert not any(predicate_in_3cut(cycle(5), e) for e in range(5))
    assert not any(predicate_in_3cut(complete(5), e) for e in range(10))


def _bridge_two():
    # S = {0,1,2,3}: triangle 0-1-2 plus bridge f = 2-3; vertex 3 meets two cut edges.
    g = Graph(7, [(0, 1), (1, 2), (0, 2), (2, 3), (4, 5), (5, 6), (4, 6), (3, 4), (3, 6), (0, 5)])
    return g, delta(g, {0, 1, 2, 3}), g.edge_id(0, 1), g.edge_id(4, 5), g.edge_id(2, 3)


def _leaf():
    # as above, but vertex 3 meets one cut edge only
    g = Graph(7, [(0, 1), (1, 2), (0, 2), (2, 3), (4, 5), (5, 6), (4, 6), (3, 4), (0, 5)])
    return g, delta(g, {0, 1, 2, 3}), g.edge_id(0, 1), g.edge_id(4, 5), g.edge_id(2, 3)


def test_delta_wf_bridge_two():
    g, cut, e1, e2, f = _bridge_two()
    assert cut.minimal
    assert predicate_delta_Wf(g, cut, e1, e2, f) == {g.edge_id(3, 4), g.edge_id(3, 6)}
    assert not predicate_connectivity_facet(g, cut, e1, e2)
    rep = face_report(enumerate_2ec(g), make_connectivity(g, cut, e1, e2))
    assert rep.valid and not rep.is_facet


def test_delta_wf_leaf():
    g, cut, e1, e2, f = _leaf()
    assert predicate_delta_Wf(g, cut, e1, e2, f) == {g.edge_id(3, 4)}
    assert predicate_connectivity_facet(g, cut, e1, e2)
    assert face_report(enumerate_2ec(g), make_connectivity(g, cut, e1, e2)).is_facet


def test_delta_wf_rejections():
    g, cut, e1, e2, f = _bridge_two()
    with pytest.raises(ValueError):
        predicate_delta_Wf(g, cut, e1, e2, e1)
    with pytest.raises(ValueError):
        predicate_delta_Wf(g, cut, e1, e2, g.edge_id(3, 4))
    with pytest.raises(ValueError):
        predicate_delta_Wf(g, cut, e1, e2, g.edge_id(1, 2))


def test_two_edge_connected_shores_have_no_bridges():
    cc = cci_graph()
    g = cc.graph
    cut = delta(g, {0, 1, 2})
    assert predicate_connectivity_facet(g, cut, cc.labels["e1"], cc.labels["e2"])


# ---------------------------------------------------------------- theorem checks


def test_check_theorems_k4():
    rep = check_theorems(complete(4))
    assert rep.ok and rep.polytope_dim == 6 and rep.vertex_count == 15
    low = rep.results["box_lower"]
    assert low.checked == 6 and low.facets == 0
    assert rep.results["odd_star"].facets == 4


def test_check_theorems_cpci_coparallel_facets():
    rep = check_theorems(cpci_graph().graph)
    assert rep.ok
    cop = rep.results["coparallel"]
    assert cop.checked > 0 and cop.facets == cop.checked


def test_check_theorems_c6_two_cuts_are_not_facets():
    rep = check_theorems(cycle(6))
    assert rep.ok
    asym = rep.results["asymmetric"]
    assert asym.checked > 0 and asym.facets == 0


def test_check_theorems_skips_non_minimal_cuts():
    rep = check_theorems(Graph(6, [(i, (i + 1) % 6) for i in range(6)] + [(0, 3)]))
    assert rep.ok and rep.results["asymmetric"].skipped > 0


def test_check_theorems_rejections():
    with pytest.raises(ValueError):
        check_theorems(two_triangles_bridge().graph)
    with pytest.raises(ValueError):
        check_theorems(cycle(4), families=["nope"])


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_check_theorems_on_random_graphs(seed):
    g = _random(seed, 4, 8)
    rep = check_theorems(g)
    assert rep.ok, {k: r.mismatches[:2] for k, r in rep.results.items() if r.mismatches}


@pytest.mark.parametrize("g", [cpci_graph().graph, cci_graph().graph, bowtie(), _bridge_two()[0]])
def test_degenerate_coparallel_rows_match_their_equivalents(g):
    vs = enumerate_2ec(g)
    pairs = degenerate_coparallel_rows(g)
    assert pairs
    for row, other in pairs:
        a, b = face_report(vs, row), face_report(vs, other)
        assert a.valid and b.valid
        assert set(a.tight_vectors.tolist()) == set(b.tight_vectors.tolist())


def test_degenerate_rows_cover_both_sizes():
    g = _bridge_two()[0]
    pairs = degenerate_coparallel_rows(cpci_graph().graph) + degenerate_coparallel_rows(g)
    kinds = {other.family for _, other in pairs}
    assert kinds == {Family.BOX_UPPER, Family.CONNECTIVITY}
