"""Coparallel classes: edges pairwise forming minimal 2-cuts."""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import EdgeSubgraph, Graph, _bridges, _components, is_two_edge_connected


@dataclass(frozen=True)
class CoparallelPartition:
    classes: tuple[tuple[int, ...], ...]
    class_of: dict[int, int] = field(compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.classes)


class _DisjointSet:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def coparallel_partition(g: Graph) -> CoparallelPartition:
    """Partition of non-bridge edges; f joins e's class iff f is a bridge of G' - e.

    G' is G with its bridges deleted.  Classes are sorted internally and ordered
    by their smallest edge id.
    """
    bridge_set = _bridges(g.n, g._adj)
    live = [e for e in range(g.m) if e not in bridge_set]
    dsu = _DisjointSet(live)
    dead = set(bridge_set)
    for e in live:
        dead.add(e)
        for f in _bridges(g.n, g._adj, dead):
            dsu.union(e, f)
        dead.discard(e)
    groups: dict[int, list[int]] = {}
    for e in live:
        groups.setdefault(dsu.find(e), []).append(e)
    classes = tuple(sorted((tuple(sorted(c)) for c in groups.values()), key=lambda c: c[0]))
    class_of = {e: i for i, c in enumerate(classes) for e in c}
    return CoparallelPartition(classes, class_of)


def components_after_class_removal(
    g: Graph, class_index: int, partition: CoparallelPartition | None = None
) -> list[EdgeSubgraph]:
    """Connected components of G - C, edgeless single vertices included."""
    if not is_two_edge_connected(g):
        raise ValueError("graph must be 2-edge-connected")
    if partition is None:
        partition = coparallel_partition(g)
    if not 0 <= class_index < len(partition.classes):
        raise IndexError(f"class index {class_index} out of range")
    removed = set(partition.classes[class_index])
    comps = _components(g.n, g._adj, lambda e: e not in removed)
    out = []
    for comp in comps:
        vs = frozenset(comp)
        es = frozenset(
            e for v in comp for _, e in g.adjacency(v) if e not in removed
        )
        out.append(EdgeSubgraph(es, vs))
    return out


def edge_components_after_class_removal(
    g: Graph, partition: CoparallelPartition
) -> list[list[frozenset[int]]]:
    """Per class, the edge sets of the edge-containing components of G - C."""
    result = []
    for ci in range(len(partition.classes)):
        comps = components_after_class_removal(g, ci, partition)
        result.append([c.edges for c in comps if c.edges])
    return result


def dimension(g: Graph) -> int:
    """|CP(G)|, which equals dim TECSP(G)."""
    return len(coparallel_partition(g).classes)
