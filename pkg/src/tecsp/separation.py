"""Exact separation routines for the asymmetric, connectivity and coparallel families."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .copar import CoparallelPartition, edge_components_after_class_removal
from .graph import Graph, _components, is_two_edge_connected, min_st_cut
from .inequalities import (
    LinearInequality,
    make_asymmetric,
    make_connectivity,
    make_coparallel_class,
)

FLOAT_VIOLATION_TOL = 1e-6


@dataclass
class SeparationResult:
    """Violated rows with their violation, most violated first."""

    violated: list[tuple[LinearInequality, Any]] = field(default_factory=list)
    exhausted: bool = True

    @property
    def rows(self) -> list[LinearInequality]:
        return [r for r, _ in self.violated]

    def __bool__(self) -> bool:
        return bool(self.violated)


def _is_exact(x: Sequence) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in x)


def _default_tol(x: Sequence, tol):
    if tol is not None:
        return tol
    return 0 if _is_exact(x) else FLOAT_VIOLATION_TOL


def _collect(found: dict, exhausted: bool = True) -> SeparationResult:
    items = sorted(found.values(), key=lambda rv: (-rv[1], rv[0].key))
    return SeparationResult(items, exhausted)


def _add(found: dict, row: LinearInequality, amount) -> None:
    if row.key not in found:
        found[row.key] = (row, amount)


def separate_asymmetric(g: Graph, x: Sequence, tol=None) -> SeparationResult:
    """For each e = {s,t}: minimum s-t cut of G - e under capacities x."""
    tol = _default_tol(x, tol)
    found: dict = {}
    for e, (s, t) in enumerate(g.edges):
        if x[e] <= tol:
            continue
        caps = list(x)
        caps[e] = 0 * x[e]
        value, cut = min_st_cut(g, caps, s, t)
        amount = x[e] - value
        if amount > tol:
            _add(found, make_asymmetric(g, cut, e), amount)
    return _collect(found)


def _conn_pair(g: Graph, x: Sequence, e1: int, e2: int, tol, big):
    caps = list(x)
    caps[e1] = big
    caps[e2] = big
    value, cut = min_st_cut(g, caps, g.edges[e1][0], g.edges[e2][0])
    if e1 in cut.cut_edges or e2 in cut.cut_edges:
        return None
    amount = 2 * x[e1] + 2 * x[e2] - value - 2
    if amount > tol:
        return make_connectivity(g, cut, e1, e2), amount
    return None


def separate_connectivity(
    g: Graph, x: Sequence, tol=None, heuristic: bool = False
) -> SeparationResult:
    """All pairs of non-adjacent edges, with capacity 2|E| on the pair.

    Pairs with ``2 x_e1 + 2 x_e2 - 2 <= tol`` are skipped: no cut can make
    them violated.  ``heuristic`` first tries one pair per pair of support
    components and returns early (not exhausted) if that already finds rows.
    """
    tol = _default_tol(x, tol)
    big = 2 * g.m
    found: dict = {}
    if heuristic:
        support = {e for e in range(g.m) if x[e] > tol}
        verts = {v for e in support for v in g.edges[e]}
        comps = _components(g.n, g._adj, support.__contains__, verts)
        best = []
        for comp in comps:
            cs = set(comp)
            es = [e for e in support if g.edges[e][0] in cs]
            best.append(max(es, key=lambda e: (x[e], -e)))
        for i in range(len(best)):
            for j in range(i + 1, len(best)):
                hit = _conn_pair(g, x, min(best[i], best[j]), max(best[i], best[j]), tol, big)
                if hit:
                    _add(found, *hit)
        if found:
            return _collect(found, exhausted=False)
    for e1 in range(g.m):
        if 2 * x[e1] <= tol:
            continue
        a1, b1 = g.edges[e1]
        for e2 in range(e1 + 1, g.m):
            a2, b2 = g.edges[e2]
            if a2 in (a1, b1) or b2 in (a1, b1):
                continue
            if 2 * x[e1] + 2 * x[e2] - 2 <= tol:
                continue
            hit = _conn_pair(g, x, e1, e2, tol, big)
            if hit:
                _add(found, *hit)
    return _collect(found)


def separate_coparallel(
    g: Graph,
    partition: CoparallelPartition,
    x: Sequence,
    tol=None,
    components: list[list[frozenset[int]]] | None = None,
) -> SeparationResult:
    """Most violated coparallel row per class with at least three components.

    ``components`` may carry the cached output of
    ``edge_components_after_class_removal``.
    """
    if components is None:
        if not is_two_edge_connected(g):
            raise ValueError("graph must be 2-edge-connected")
        components = edge_components_after_class_removal(g, partition)
    tol = _default_tol(x, tol)
    found: dict = {}
    for ci, comps in enumerate(components):
        r = len(comps)
        if r < 3:
            continue
        chosen = [max(comp, key=lambda e: (x[e], -e)) for comp in comps]
        f = min(partition.classes[ci], key=lambda e: (x[e], e))
        amount = sum(x[e] for e in chosen) - (r - 1) * x[f] - 1
        if amount > tol:
            row = make_coparallel_class(g, partition, ci, f, chosen, comps)
            _add(found, row, amount)
    return _collect(found)
