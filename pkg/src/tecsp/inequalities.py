"""Sparse rows a.x <= b for the valid inequality families of TECSP(G)."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .copar import CoparallelPartition, components_after_class_removal
from .graph import CutSet, Graph


class Family(enum.Enum):
    BOX_LOWER = "box_lower"
    BOX_UPPER = "box_upper"
    ASYMMETRIC = "asymmetric"
    CONNECTIVITY = "connectivity"
    COPARALLEL = "coparallel"
    ODD_STAR = "odd_star"


@dataclass(frozen=True)
class LinearInequality:
    """Row ``sum coeff_e * x_e <= rhs`` in canonical (ascending edge id) form.

    Equality and hashing look only at coefficients and rhs, so rows built from
    different witnesses collapse in a cut pool.
    """

    coefficients: tuple[tuple[int, Fraction], ...]
    rhs: Fraction
    family: Family = field(compare=False)
    provenance: Mapping[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @property
    def key(self) -> tuple:
        return (self.coefficients, self.rhs)

    def coefficient(self, e: int) -> Fraction:
        for eid, c in self.coefficients:
            if eid == e:
                return c
        return Fraction(0)

    def lhs(self, x: Sequence) -> Any:
        return sum((c * x[e] for e, c in self.coefficients), Fraction(0))

    def violation(self, x: Sequence) -> Any:
        """``a.x - rhs`` (positive when violated); exact for rational x."""
        if x and isinstance(x[0], float):
            return sum(float(c) * x[e] for e, c in self.coefficients) - float(self.rhs)
        return self.lhs(x) - self.rhs

    def dense(self, m: int) -> list[Fraction]:
        row = [Fraction(0)] * m
        for e, c in self.coefficients:
            row[e] = c
        return row


def _row(coeffs: Mapping[int, Any], rhs, family: Family, **provenance) -> LinearInequality:
    items = tuple(sorted((e, Fraction(c)) for e, c in coeffs.items() if c != 0))
    return LinearInequality(items, Fraction(rhs), family, provenance)


def make_box_lower(g: Graph, e: int) -> LinearInequality:
    _check_edge(g, e)
    return _row({e: -1}, 0, Family.BOX_LOWER, e=e)


def make_box_upper(g: Graph, e: int) -> LinearInequality:
    _check_edge(g, e)
    return _row({e: 1}, 1, Family.BOX_UPPER, e=e)


def make_asymmetric(g: Graph, cut: CutSet, e: int) -> LinearInequality:
    if e not in cut.cut_edges:
        raise ValueError(f"edge {e} is not in the cut")
    coeffs = {f: -1 for f in cut.cut_edges}
    coeffs[e] = 1
    return _row(coeffs, 0, Family.ASYMMETRIC, side=cut.side, e=e)


def make_connectivity(g: Graph, cut: CutSet, e1: int, e2: int) -> LinearInequality:
    u1, v1 = g.edges[e1]
    u2, v2 = g.edges[e2]
    if not (u1 in cut.side and v1 in cut.side):
        raise ValueError(f"e1={e1} must have both ends inside the cut side")
    if u2 in cut.side or v2 in cut.side:
        raise ValueError(f"e2={e2} must have both ends outside the cut side")
    coeffs = {f: -1 for f in cut.cut_edges}
    coeffs[e1] = 2
    coeffs[e2] = 2
    return _row(coeffs, 2, Family.CONNECTIVITY, side=cut.side, e1=e1, e2=e2)


def make_coparallel_class(
    g: Graph,
    partition: CoparallelPartition,
    class_index: int,
    f: int,
    e_choices: Sequence[int],
    components: Sequence[frozenset[int]] | None = None,
) -> LinearInequality:
    """``sum_j x_{e_j} - (r-1) x_f <= 1`` with one e_j per component of G - C.

    Degenerate sizes r = 1 and r = 2 are accepted (the row is still valid);
    only r >= 3 gives a new facet class.
    """
    cls = partition.classes[class_index]
    if f not in cls:
        raise ValueError(f"f={f} is not in class {class_index}")
    if components is None:
        components = [
            c.edges for c in components_after_class_removal(g, class_index, partition) if c.edges
        ]
    owner = {e: i for i, comp in enumerate(components) for e in comp}
    used = set()
    for e in e_choices:
        if e not in owner:
            raise ValueError(f"e={e} lies in no component of G - C")
        if owner[e] in used:
            raise ValueError("two chosen edges lie in the same component of G - C")
        used.add(owner[e])
    if len(used) != len(components):
        raise ValueError("need exactly one chosen edge per edge-containing component")
    r = len(e_choices)
    coeffs = {e: 1 for e in e_choices}
    coeffs[f] = -(r - 1)
    return _row(coeffs, 1, Family.COPARALLEL, class_index=class_index, f=f, e=tuple(e_choices))


def make_odd_star(g: Graph, v: int, witness: tuple[int, int] | None = None) -> LinearInequality:
    """Star row centred at ``v`` on a complete graph; odd n needs ``(h, f)``."""
    n = g.n
    if n < 4:
        raise ValueError("odd star rows need n >= 4")
    if not g.is_complete():
        raise ValueError("odd star rows are defined on complete graphs only")
    star = {e for _, e in g.adjacency(v)}
    coeffs = {e: (1 if e in star else -1) for e in range(g.m)}
    if n % 2 == 0:
        if witness is not None:
            raise ValueError("even n takes no witness")
        return _row(coeffs, Fraction(n - 2, 2), Family.ODD_STAR, v=v)
    if witness is None:
        raise ValueError("odd n requires a witness (h, f)")
    h, f = witness
    if h in star:
        raise ValueError("h must avoid the centre")
    if f not in star:
        raise ValueError("f must be incident to the centre")
    w1 = g.edges[f][0] if g.edges[f][1] == v else g.edges[f][1]
    if w1 not in g.edges[h]:
        raise ValueError("h and f must share the vertex w1")
    coeffs[h] = 0
    coeffs[f] = -1
    return _row(coeffs, Fraction(n - 3, 2), Family.ODD_STAR, v=v, h=h, f=f)


def enumerate_odd_stars(g: Graph) -> list[LinearInequality]:
    n = g.n
    if not g.is_complete() or n < 4:
        raise ValueError("odd stars need a complete graph with n >= 4")
    rows = []
    if n % 2 == 0:
        rows = [make_odd_star(g, v) for v in range(n)]
        expected = n
    else:
        for v in range(n):
            for w1, w2 in itertools.permutations([u for u in range(n) if u != v], 2):
                rows.append(make_odd_star(g, v, (g.edge_id(w1, w2), g.edge_id(v, w1))))
        expected = n * (n - 1) * (n - 2)
    assert len(rows) == expected, (len(rows), expected)
    return rows


def _check_edge(g: Graph, e: int) -> None:
    if not 0 <= e < g.m:
        raise IndexError(f"edge id {e} out of range")
