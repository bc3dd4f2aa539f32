"""Small named graphs and a seeded generator of random 2-edge-connected graphs."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph import Graph
from .rng import Xoshiro256


@dataclass(frozen=True)
class NamedGraph:
    name: str
    graph: Graph
    labels: dict[str, int] = field(default_factory=dict, compare=False, hash=False)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_minus_edge(n: int) -> Graph:
    return Graph(n, [e for e in itertools.combinations(range(n), 2) if e != (0, 1)])


def two_triangles_bridge() -> NamedGraph:
    g = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    return NamedGraph("two-triangles-bridge", g, {"bridge": 6})


def bowtie() -> Graph:
    """Two triangles sharing vertex 0."""
    return Graph(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)])


def cci_graph() -> NamedGraph:
    """Two triangles {a,b,c}, {d,e,g} joined by f1 = b-d and f2 = a-e.

    Vertex order a, b, c, d, e, g.  The side S = {a, b, c} has cut {f1, f2};
    e1 = a-c lies in G[S] and e2 = e-g in G[V - S].
    """
    a, b, c, d, e, g_ = range(6)
    edges = [(a, e), (b, d), (a, b), (d, e), (a, c), (b, c), (e, g_), (d, g_)]
    g = Graph(6, edges)
    labels = {
        "f1": g.edge_id(b, d),
        "f2": g.edge_id(a, e),
        "e1": g.edge_id(a, c),
        "e2": g.edge_id(e, g_),
    }
    return NamedGraph("cci", g, labels)


def cpci_graph() -> NamedGraph:
    """Triangle with subdivided sides and three corner chords.

    Removing the middle third of each side (f1, f2, f3) leaves three corner
    triangles; e1, e2, e3 are the chords, one per triangle.
    """
    p0, p1, p2, p3, q1, q2, q3, r1, r2 = range(9)
    boundary = [
        (p0, p1), (p1, p2), (p2, p3),
        (p0, q1), (q1, q2), (q2, q3),
        (p3, r1), (r1, r2), (r2, q3),
    ]
    chords = [(p1, q1), (p2, r1), (q2, r2)]
    g = Graph(9, boundary + chords)
    labels = {
        "f1": g.edge_id(q1, q2),
        "f2": g.edge_id(p1, p2),
        "f3": g.edge_id(r1, r2),
        "e1": g.edge_id(p1, q1),
        "e2": g.edge_id(p2, r1),
        "e3": g.edge_id(q2, r2),
    }
    return NamedGraph("cpci", g, labels)


def disconnected_side_graph() -> NamedGraph:
    """A 6-cycle 0..5 plus chord 0-3; S = {1, 5} induces no edges (two pieces)."""
    g = Graph(6, [(i, (i + 1) % 6) for i in range(6)] + [(0, 3)])
    return NamedGraph("disconnected-side", g, {})


def random_2ec_graph(rng: Xoshiro256, n: int, extra: int = 0, max_ear: int = 3) -> Graph:
    """Random 2EC graph grown by ears from a cycle, then ``extra`` random chords.

    Long ears create nontrivial coparallel classes; chords merge them.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    first = min(n, rng.randint(3, max(3, min(n, 5))))
    edges: set[tuple[int, int]] = {(min(i, (i + 1) % first), max(i, (i + 1) % first)) for i in range(first)}
    used = first
    while used < n:
        length = min(rng.randint(1, max_ear), n - used)
        a = rng.randint(0, used - 1)
        b = rng.randint(0, used - 1)
        if a == b and length < 2:
            length = 2 if n - used >= 2 else length
            if length < 2:
                b = (a + 1 + rng.randint(0, used - 2)) % used
        chain = [a] + list(range(used, used + length)) + [b]
        used += length
        for u, v in zip(chain, chain[1:]):
            edges.add((min(u, v), max(u, v)))
    non_edges = [p for p in itertools.combinations(range(n), 2) if p not in edges]
    for p in rng.sample(non_edges, min(extra, len(non_edges))):
        edges.add(p)
    return Graph(n, sorted(edges))
