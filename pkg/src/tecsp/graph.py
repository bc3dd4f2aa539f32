"""Simple undirected graphs with stable edge ids, plus connectivity primitives."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .flow import max_flow_undirected

FLOAT_FLOW_EPS = 1e-12


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Edge ``i`` is stored as ``(u, v)`` with ``u < v``; ids are dense and fixed
    at construction.
    """

    __slots__ = ("n", "edges", "_adj", "_index", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        normalized: list[tuple[int, int]] = []
        index: dict[tuple[int, int], int] = {}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in index:
                raise ValueError(f"duplicate edge {key}")
            index[key] = len(normalized)
            normalized.append(key)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(normalized):
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(normalized)
        self._adj = tuple(tuple(a) for a in adj)
        self._index = index
        self._hash = hash((n, self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self, v: int) -> tuple[tuple[int, int], ...]:
        """Pairs ``(neighbor, edge id)`` incident to ``v``."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"no edge between {u} and {v}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._index

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def edge_subgraph(self, eids: Iterable[int]) -> tuple["Graph", list[int]]:
        """Graph on the same vertex set keeping only ``eids``; returns new->old ids."""
        kept = sorted(set(eids))
        return Graph(self.n, [self.edges[e] for e in kept]), kept

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class CutSet:
    side: frozenset[int]
    cut_edges: frozenset[int]
    minimal: bool


@dataclass(frozen=True)
class EdgeSubgraph:
    edges: frozenset[int]
    vertices: frozenset[int]

    @classmethod
    def from_edges(cls, g: Graph, eids: Iterable[int]) -> "EdgeSubgraph":
        es = frozenset(eids)
        vs = frozenset(x for e in es for x in g.edges[e])
        return cls(es, vs)

    def incidence(self, m: int) -> tuple[int, ...]:
        return tuple(1 if e in self.edges else 0 for e in range(m))


def _components(n: int, adj, alive=None, vertices: Iterable[int] | None = None) -> list[list[int]]:
    """Components over ``vertices`` (default all) using edges accepted by ``alive``."""
    pool = range(n) if vertices is None else vertices
    allowed = None if vertices is None else set(vertices)
    seen = [False] * n
    comps: list[list[int]] = []
    for r in sorted(pool):
        if seen[r]:
            continue
        seen[r] = True
        stack = [r]
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w, e in adj[v]:
                if seen[w] or (alive is not None and not alive(e)):
                    continue
                if allowed is not None and w not in allowed:
                    continue
                seen[w] = True
                stack.append(w)
        comps.append(sorted(comp))
    return comps


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex components, each sorted, ordered by smallest vertex."""
    return _components(g.n, g._adj)


def _bridges(n: int, adj, dead: set[int] | frozenset[int] = frozenset()) -> set[int]:
    """Iterative low-link bridge search ignoring edge ids in ``dead``."""
    disc = [-1] * n
    low = [0] * n
    found: set[int] = set()
    clock = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = clock
        clock += 1
        # frames: (vertex, parent edge id, iterator position)
        stack = [(root, -1, 0)]
        while stack:
            v, pe, i = stack[-1]
            nbrs = adj[v]
            if i < len(nbrs):
                stack[-1] = (v, pe, i + 1)
                w, e = nbrs[i]
                if e == pe or e in dead:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, e, 0))
                elif disc[w] < low[v]:
                    low[v] = disc[w]
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if low[v] > disc[p]:
                        found.add(pe)
    return found


def bridges(g: Graph) -> set[int]:
    return _bridges(g.n, g._adj)


def is_two_edge_connected(g: Graph) -> bool:
    """Connected over all vertices and bridgeless; n <= 1 counts as 2EC."""
    if g.n <= 1:
        return True
    return len(connected_components(g)) == 1 and not bridges(g)


def edge_set_is_2ec(g: Graph, eids: Iterable[int]) -> bool:
    """Whether the subgraph formed by ``eids`` and their endpoints is 2EC."""
    es = set(eids)
    if not es:
        return True
    verts = {x for e in es for x in g.edges[e]}
    alive = es.__contains__
    if len(_components(g.n, g._adj, alive, verts)) != 1:
        return False
    dead = frozenset(range(g.m)) - es
    return not _bridges(g.n, g._adj, dead)


def delta(g: Graph, side: Iterable[int]) -> CutSet:
    s = frozenset(side)
    if not s or len(s) >= g.n:
        raise ValueError("cut side must be a nonempty proper vertex subset")
    if any(not (0 <= v < g.n) for v in s):
        raise ValueError("cut side contains a vertex out of range")
    cut = frozenset(e for e, (u, v) in enumerate(g.edges) if (u in s) != (v in s))
    return CutSet(s, cut, _sides_connected(g, s))


def _sides_connected(g: Graph, s: frozenset[int]) -> bool:
    other = [v for v in range(g.n) if v not in s]
    return (
        len(_components(g.n, g._adj, None, s)) == 1
        and len(_components(g.n, g._adj, None, other)) == 1
    )


def min_st_cut(g: Graph, capacities: Sequence, s: int, t: int):
    """Minimum s-t cut as ``(value, CutSet)``; the side contains ``s``.

    Exact when capacities are ints/Fractions, tolerance-based for floats.
    The returned side is normalized so that both shores are connected
    whenever the graph is connected; this keeps the cut inclusion-minimal
    without changing its value.
    """
    if s == t:
        raise ValueError("s and t must differ")
    if len(capacities) != g.m:
        raise ValueError("one capacity per edge required")
    exact = all(isinstance(c, (int, Fraction)) for c in capacities)
    eps = 0 if exact else FLOAT_FLOW_EPS
    if g.m == 0:
        value = Fraction(0) if exact else 0.0
        reaches = [v == t for v in range(g.n)]
    else:
        value, reaches = max_flow_undirected(g.n, g.edges, capacities, s, t, eps)
    sink_side = {v for v in range(g.n) if reaches[v]}
    rest = [v for v in range(g.n) if v not in sink_side]
    # the component of s inside G - sink_side becomes the source shore
    source = next(c for c in _components(g.n, g._adj, None, rest) if s in c)
    side = frozenset(source)
    sink_comp = next(
        c for c in _components(g.n, g._adj, None, [v for v in range(g.n) if v not in side]) if t in c
    )
    if len(sink_comp) != g.n - len(side):
        # fold stray pieces into the source shore only when that keeps it connected
        side = frozenset(v for v in range(g.n) if v not in set(sink_comp))
        if len(_components(g.n, g._adj, None, side)) != 1:
            side = frozenset(source)
    cut = delta(g, side)
    if exact:
        value = sum((capacities[e] for e in cut.cut_edges), Fraction(0))
    else:
        value = float(sum(capacities[e] for e in cut.cut_edges))
    return value, cut


def simplify_multigraph(
    n: int, multi_edges: Sequence[tuple[int, int, int]]
) -> tuple[Graph, list[int], list[tuple[int, ...]]]:
    """Replace parallel copies by length-two paths through fresh vertices.

    Returns ``(graph, weights, back)`` where ``back[i]`` lists the new edge ids
    standing for input edge ``i``.  The first copy of a pair stays a simple
    edge; each further copy becomes ``u - x - v`` with the weight on the first
    path edge and 0 on the second.
    """
    edges: list[tuple[int, int]] = []
    weights: list[int] = []
    back: list[tuple[int, ...]] = []
    seen: set[tuple[int, int]] = set()
    fresh = n
    for u, v, w in multi_edges:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        key = (min(u, v), max(u, v))
        if key not in seen:
            seen.add(key)
            back.append((len(edges),))
            edges.append(key)
            weights.append(w)
        else:
            x = fresh
            fresh += 1
            back.append((len(edges), len(edges) + 1))
            edges.extend([(key[0], x), (x, key[1])])
            weights.extend([w, 0])
    return Graph(fresh, edges), weights, back
