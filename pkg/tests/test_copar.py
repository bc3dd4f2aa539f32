import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_coparallel_classes, naive_2ec_vectors
from tecsp.copar import (
    components_after_class_removal,
    coparallel_partition,
    dimension,
    edge_components_after_class_removal,
)
from tecsp.corpus import complete, cpci_graph, cycle, path, random_2ec_graph, two_triangles_bridge
from tecsp.graph import Graph, edge_set_is_2ec
from tecsp.oracle import enumerate_2ec
from tecsp.rng import Xoshiro256

seeds = st.integers(0, 2**40)


def _random(seed, lo=4, hi=10):
    rng = Xoshiro256(seed)
    n = rng.randint(lo, hi)
    return random_2ec_graph(rng, n, extra=rng.randint(0, 3))


def test_cycle_is_one_class():
    p = coparallel_partition(cycle(6))
    assert p.classes == (tuple(range(6)),)
    assert dimension(cycle(6)) == 1


def test_k4_has_singleton_classes():
    p = coparallel_partition(complete(4))
    assert len(p.classes) == 6 and all(len(c) == 1 for c in p.classes)
    assert dimension(complete(4)) == 6


def test_cpci_partition():
    cp = cpci_graph()
    p = coparallel_partition(cp.graph)
    f = {cp.labels[k] for k in ("f1", "f2", "f3")}
    assert f in [set(c) for c in p.classes]
    assert len(p.classes) == 7 == len(brute_coparallel_classes(cp.graph))
    assert dimension(cp.graph) == 7


def test_bridges_get_no_class():
    tb = two_triangles_bridge()
    p = coparallel_partition(tb.graph)
    assert tb.labels["bridge"] not in p.class_of
    assert len(p.classes) == 2
    assert coparallel_partition(path(4)).classes == ()


def test_classes_ordered_by_smallest_edge():
    p = coparallel_partition(_random(11, 8, 10))
    firsts = [c[0] for c in p.classes]
    assert firsts == sorted(firsts)
    assert all(list(c) == sorted(c) for c in p.classes)


def test_components_after_removal_examples():
    comps = components_after_class_removal(cycle(5), 0)
    assert len(comps) == 5 and all(not c.edges for c in comps)
    cp = cpci_graph()
    p = coparallel_partition(cp.graph)
    ci = p.class_of[cp.labels["f1"]]
    tri = [c for c in components_after_class_removal(cp.graph, ci, p) if c.edges]
    assert len(tri) == 3 and all(len(c.edges) == 3 and len(c.vertices) == 3 for c in tri)
    k4 = components_after_class_removal(complete(4), 2)
    assert len(k4) == 1 and len(k4[0].edges) == 5


def test_components_after_removal_rejects_non_2ec():
    with pytest.raises(ValueError):
        components_after_class_removal(two_triangles_bridge().graph, 0)
    with pytest.raises(IndexError):
        components_after_class_removal(cycle(4), 3)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_partition_matches_brute_force_cuts(seed):
    g = _random(seed)
    got = sorted((frozenset(c) for c in coparallel_partition(g).classes), key=min)
    assert got == brute_coparallel_classes(g)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_components_after_removal_are_2ec(seed):
    g = _random(seed)
    p = coparallel_partition(g)
    for ci in range(len(p.classes)):
        for comp in components_after_class_removal(g, ci, p):
            if comp.edges:
                assert edge_set_is_2ec(g, comp.edges)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_refinement_of_classes(seed):
    g = _random(seed)
    p = coparallel_partition(g)
    parent = [set(c) for c in p.classes]
    for ci, comps in enumerate(edge_components_after_class_removal(g, p)):
        for es in comps:
            sub, back = g.edge_subgraph(sorted(es))
            for sc in coparallel_partition(sub).classes:
                orig = {back[e] for e in sc}
                hits = [c for c in parent if c & orig]
                assert all(c <= orig for c in hits)
                assert len(hits) in (1, 2)
                assert set().union(*hits) == orig


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_all_or_nothing(seed):
    g = _random(seed, 4, 8)
    p = coparallel_partition(g)
    for vec in naive_2ec_vectors(g) if g.m <= 12 else enumerate_2ec(g).as_set():
        for c in p.classes:
            assert len({vec[e] for e in c}) == 1


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_dimension_equals_affine_rank(seed):
    g = _random(seed, 4, 9)
    assert enumerate_2ec(g).dimension == dimension(g)


def test_partition_on_graph_with_bridges_matches_components():
    g = Graph(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 3)])
    p = coparallel_partition(g)
    assert 3 not in p.class_of
    assert sorted(map(len, p.classes)) == [3, 4]
