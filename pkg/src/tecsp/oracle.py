"""Exact brute-force ground truth for small graphs.

Enumerates the incidence vectors of all 2-edge-connected subgraphs, measures
affine ranks exactly, and compares facet status of every inequality instance
with its combinatorial characterization.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .copar import CoparallelPartition, coparallel_partition, edge_components_after_class_removal
from .graph import (
    CutSet,
    Graph,
    _bridges,
    _components,
    delta,
    edge_set_is_2ec,
    is_two_edge_connected,
)
from .inequalities import (
    Family,
    LinearInequality,
    make_asymmetric,
    make_box_lower,
    make_box_upper,
    make_connectivity,
    make_coparallel_class,
    make_odd_star,
    enumerate_odd_stars,
)

ENUM_BUDGET = 24
SUBSET_BUDGET = 16
LATTICE_BUDGET = 18
_CHUNK = 1 << 16


class BudgetExceeded(ValueError):
    pass


# ---------------------------------------------------------------- enumeration


@dataclass
class VertexSet2EC:
    """Incidence vectors (rows of ``vectors``) of all 2EC subgraphs of ``graph``."""

    graph: Graph
    vectors: np.ndarray
    _dim: int | None = field(default=None, repr=False)
    _f32: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def as_set(self) -> set[tuple[int, ...]]:
        return {tuple(int(v) for v in row) for row in self.vectors}

    @property
    def as_float32(self) -> np.ndarray:
        """Cached float32 copy; integer row values stay exact far below 2**24."""
        if self._f32 is None:
            self._f32 = self.vectors.astype(np.float32)
        return self._f32

    @property
    def dimension(self) -> int:
        if self._dim is None:
            self._dim = affine_dimension(self.vectors)
        return self._dim


def _class_masks(g: Graph, partition: CoparallelPartition) -> list[int]:
    return [sum(1 << e for e in cls) for cls in partition.classes]


def _union_table(masks: Sequence[int]) -> np.ndarray:
    """All 2^k unions of the given edge masks, indexed by the subset bitmask."""
    table = np.zeros(1 << len(masks), dtype=np.uint64)
    for i, cm in enumerate(masks):
        half = 1 << i
        table[half : 2 * half] = table[:half] | np.uint64(cm)
    return table


def enumerate_2ec(g: Graph, budget: int = ENUM_BUDGET, method: str = "auto") -> VertexSet2EC:
    """Incidence vectors of every 2EC subgraph, via unions of coparallel classes.

    ``method="dfs"`` tests each union with a graph search; ``method="cuts"``
    tests all unions at once against every minimal cut of G (a union fails
    when some minimal cut meets it in exactly one edge, or meets it in none
    while it has edges on both shores).  ``auto`` picks ``cuts`` when it fits.
    """
    partition = coparallel_partition(g)
    k = len(partition.classes)
    if k > budget:
        raise BudgetExceeded(f"|CP| = {k} exceeds enumeration budget {budget}")
    if method == "auto":
        method = "cuts" if g.m <= 64 and g.n <= SUBSET_BUDGET else "dfs"
    if method == "dfs":
        kept = []
        for sel in range(1 << k):
            es = [e for i, cls in enumerate(partition.classes) if sel >> i & 1 for e in cls]
            if edge_set_is_2ec(g, es):
                kept.append(es)
        vectors = np.zeros((len(kept), g.m), dtype=np.int8)
        for r, es in enumerate(kept):
            vectors[r, es] = 1
    elif method == "cuts":
        vectors = _enumerate_by_cuts(g, partition)
    else:
        raise ValueError(f"unknown method {method!r}")
    return VertexSet2EC(g, vectors)


def _enumerate_by_cuts(g: Graph, partition: CoparallelPartition) -> np.ndarray:
    if g.m > 64:
        raise BudgetExceeded("cut-based enumeration needs |E| <= 64")
    table = _union_table(_class_masks(g, partition))
    cuts = [c for c in cut_table(g) if c.minimal]
    keep_parts = []
    for start in range(0, len(table), _CHUNK):
        F = table[start : start + _CHUNK]
        bad = np.zeros(F.shape, dtype=bool)
        for c in cuts:
            k = np.bitwise_count(F & np.uint64(c.cut_mask))
            inside = (F & np.uint64(c.in_mask)) != 0
            outside = (F & np.uint64(c.out_mask)) != 0
            bad |= (k == 1) | ((k == 0) & inside & outside)
        keep_parts.append(F[~bad])
    kept = np.concatenate(keep_parts) if keep_parts else np.zeros(0, dtype=np.uint64)
    bits = ((kept[:, None] >> np.arange(g.m, dtype=np.uint64)) & np.uint64(1)).astype(np.int8)
    return bits


# ---------------------------------------------------------------- cuts by brute force


@dataclass(frozen=True)
class CutRecord:
    side_mask: int
    cut_mask: int
    in_mask: int
    out_mask: int
    size: int
    minimal: bool

    def side(self) -> frozenset[int]:
        return frozenset(v for v in range(self.side_mask.bit_length()) if self.side_mask >> v & 1)

    def as_cutset(self) -> CutSet:
        return CutSet(
            self.side(),
            frozenset(e for e in range(self.cut_mask.bit_length()) if self.cut_mask >> e & 1),
            self.minimal,
        )


@functools.lru_cache(maxsize=64)
def cut_table(g: Graph) -> tuple[CutRecord, ...]:
    """Every cut delta(S), once per unordered pair {S, V - S} (S avoids vertex n-1)."""
    n = g.n
    if n > SUBSET_BUDGET:
        raise BudgetExceeded(f"|V| = {n} exceeds subset budget {SUBSET_BUDGET}")
    if n < 2:
        return ()
    sides = np.arange(1, 1 << (n - 1), dtype=np.int64)
    full = (1 << n) - 1
    comp = full ^ sides
    cut = np.zeros(sides.shape, dtype=object) if g.m > 62 else np.zeros(sides.shape, dtype=np.int64)
    ins = np.zeros_like(cut)
    outs = np.zeros_like(cut)
    for e, (u, v) in enumerate(g.edges):
        a = (sides >> u) & 1
        b = (sides >> v) & 1
        bit = 1 << e
        cut = cut + np.where(a != b, bit, 0)
        ins = ins + np.where((a == 1) & (b == 1), bit, 0)
        outs = outs + np.where((a == 0) & (b == 0), bit, 0)
    minimal = _induced_connected(g, sides) & _induced_connected(g, comp)
    records = []
    for i in range(len(sides)):
        cm = int(cut[i])
        records.append(
            CutRecord(int(sides[i]), cm, int(ins[i]), int(outs[i]), cm.bit_count(), bool(minimal[i]))
        )
    return tuple(records)


def _induced_connected(g: Graph, masks: np.ndarray) -> np.ndarray:
    """Bit-parallel test that G[mask] is connected, for each mask."""
    adj = [0] * g.n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    low = masks & -masks
    reach = low
    for _ in range(g.n):
        nbr = np.zeros_like(masks)
        for v in range(g.n):
            nbr |= np.where((reach >> v) & 1 == 1, adj[v], 0)
        new = (reach | nbr) & masks
        if np.array_equal(new, reach):
            break
        reach = new
    return reach == masks


# ---------------------------------------------------------------- exact rank


def bareiss_rank(matrix: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free Gaussian elimination."""
    a = [list(map(int, row)) for row in matrix]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    rank = 0
    prev = 1
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r][c] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            arc = a[r][c]
            row_r, row_p = a[r], a[rank]
            for j in range(c + 1, cols):
                row_r[j] = (row_r[j] * p - arc * row_p[j]) // prev
            row_r[c] = 0
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def _gram(vectors: np.ndarray) -> np.ndarray:
    """Exact Gram matrix of [V | 1] accumulated in float64 chunks.

    Entries are counts bounded by the number of vectors, far below 2**53, so
    every float64 partial sum is an exact integer.
    """
    n_rows, m = vectors.shape
    if n_rows >= 1 << 52:
        raise BudgetExceeded("too many vectors for an exact float64 Gram matrix")
    gram = np.zeros((m + 1, m + 1), dtype=np.float64)
    for start in range(0, n_rows, 1 << 18):
        block = np.ones((min(1 << 18, n_rows - start), m + 1), dtype=np.float64)
        block[:, :m] = vectors[start : start + block.shape[0]]
        gram += block.T @ block
    return np.rint(gram).astype(np.int64)


def affine_dimension(vectors) -> int:
    """Dimension of the affine hull of the given 0/1 (or small integer) vectors.

    Uses rank([V | 1]) - 1, and rank(M) = rank(M^T M) over the rationals, so
    only an (m+1) x (m+1) integer matrix is eliminated exactly.
    """
    v = np.asarray(vectors)
    if v.ndim != 2 or v.shape[0] == 0:
        raise ValueError("need a nonempty list of vectors")
    if v.shape[0] == 1:
        return 0
    if np.abs(v).max(initial=0) > 1:
        rows = [list(map(int, r)) + [1] for r in v]
        return bareiss_rank(rows) - 1
    return bareiss_rank(_gram(v).tolist()) - 1


# ---------------------------------------------------------------- faces


@dataclass
class FaceReport:
    inequality: LinearInequality
    valid: bool
    tight: np.ndarray
    face_dim: int
    polytope_dim: int

    @property
    def is_facet(self) -> bool:
        return self.valid and self.face_dim == self.polytope_dim - 1

    @property
    def tight_vectors(self) -> np.ndarray:
        return self.tight


def integer_row(row: LinearInequality) -> tuple[dict[int, int], int]:
    """Scale a row to integer coefficients (positive factor, same inequality)."""
    den = 1
    for _, c in row.coefficients:
        den = math.lcm(den, c.denominator)
    den = math.lcm(den, row.rhs.denominator)
    return {e: int(c * den) for e, c in row.coefficients}, int(row.rhs * den)


def row_values(vs: VertexSet2EC, coeffs: dict[int, int]) -> np.ndarray:
    a = np.zeros(vs.vectors.shape[1], dtype=np.float32)
    for e, c in coeffs.items():
        a[e] = c
    if np.abs(a).sum() >= 1 << 23:
        raise BudgetExceeded("row coefficients too large for exact float32 evaluation")
    return np.rint(vs.as_float32 @ a).astype(np.int64)


def face_report(vs: VertexSet2EC, row: LinearInequality) -> FaceReport:
    coeffs, rhs = integer_row(row)
    lhs = row_values(vs, coeffs)
    valid = bool((lhs <= rhs).all())
    tight = np.flatnonzero(lhs == rhs)
    return FaceReport(row, valid, tight, _face_dim(vs, tight, valid), vs.dimension)


def _face_dim(vs: VertexSet2EC, tight: np.ndarray, valid: bool, sample: int = 4096) -> int:
    """Affine dimension of the tight vectors.

    A subsample gives a lower bound; for a valid row that is not tight
    everywhere the face is proper, so dim - 1 is an upper bound.  When the
    bounds meet the answer is exact without ranking the whole tight set.
    """
    if len(tight) == 0:
        return -1
    if valid and sample < len(tight) < len(vs):
        picked = tight[np.linspace(0, len(tight) - 1, sample).astype(np.int64)]
        lower = affine_dimension(vs.vectors[picked])
        if lower == vs.dimension - 1:
            return lower
    return affine_dimension(vs.vectors[tight])


# ---------------------------------------------------------------- lattice points


def all_cut_rows(g: Graph) -> list[LinearInequality]:
    """Every asymmetric and connectivity row over all proper vertex subsets."""
    rows: dict = {}
    for rec in cut_table(g):
        cut = rec.as_cutset()
        for e in sorted(cut.cut_edges):
            r = make_asymmetric(g, cut, e)
            rows.setdefault(r.key, r)
        inner = [e for e in range(g.m) if rec.in_mask >> e & 1]
        outer = [e for e in range(g.m) if rec.out_mask >> e & 1]
        for e1 in inner:
            for e2 in outer:
                r = make_connectivity(g, cut, e1, e2)
                rows.setdefault(r.key, r)
    return list(rows.values())


@dataclass
class LatticeReport:
    feasible: int
    enumerated: int
    extra: list[tuple[int, ...]]
    missing: list[tuple[int, ...]]

    @property
    def ok(self) -> bool:
        return not self.extra and not self.missing


def lattice_report(g: Graph, budget: int = LATTICE_BUDGET) -> LatticeReport:
    if g.m > budget:
        raise BudgetExceeded(f"|E| = {g.m} exceeds lattice budget {budget}")
    if not is_two_edge_connected(g):
        raise ValueError("graph must be 2-edge-connected")
    rows = all_cut_rows(g)
    A = np.zeros((len(rows), g.m), dtype=np.float32)
    b = np.zeros(len(rows), dtype=np.float32)
    for i, r in enumerate(rows):
        for e, c in r.coefficients:
            A[i, e] = float(c)
        b[i] = float(r.rhs)
    feasible: set[tuple[int, ...]] = set()
    bit_idx = np.arange(g.m)
    for start in range(0, 1 << g.m, 1 << 12):
        ids = np.arange(start, min(start + (1 << 12), 1 << g.m))
        Y = ((ids[:, None] >> bit_idx) & 1).astype(np.float32)
        ok = (Y @ A.T <= b + 0.5).all(axis=1) if len(rows) else np.ones(len(ids), bool)
        for y in Y[ok].astype(np.int8):
            feasible.add(tuple(int(t) for t in y))
    enumerated = enumerate_2ec(g, method="dfs").as_set()
    return LatticeReport(
        len(feasible),
        len(enumerated),
        sorted(feasible - enumerated),
        sorted(enumerated - feasible),
    )


def check_lattice_points(g: Graph, budget: int = LATTICE_BUDGET) -> bool:
    """Binary points of the asymmetric + connectivity system equal the 2EC vectors."""
    return lattice_report(g, budget).ok


# ---------------------------------------------------------------- predicates


def predicate_in_3cut(g: Graph, e: int) -> bool:
    return any(rec.size == 3 and rec.cut_mask >> e & 1 for rec in cut_table(g))


def predicate_delta_Wf(g: Graph, cut: CutSet, e1: int, e2: int, f: int) -> set[int]:
    """Edges of delta(S) with an end in the piece of G[W] - f avoiding e1 and e2."""
    if f in (e1, e2):
        raise ValueError("f must differ from e1 and e2")
    u, v = g.edges[f]
    if u in cut.side and v in cut.side:
        w = set(cut.side)
    elif u not in cut.side and v not in cut.side:
        w = set(range(g.n)) - cut.side
    else:
        raise ValueError("f lies in the cut")
    wg, back = _induced(g, w)
    local_f = back.index(f)
    if local_f not in _bridges(wg.n, wg._adj):
        raise ValueError(f"f={f} is not a bridge of its side")
    comps = _components(wg.n, wg._adj, lambda e: e != local_f, sorted(w))
    touching = {x for e in (e1, e2) for x in g.edges[e]}
    free = [c for c in comps if not touching & set(c)]
    if len(free) != 1:
        raise ValueError("cut must be minimal with e1, e2 on opposite shores")
    piece = set(free[0])
    return {e for e in cut.cut_edges if piece & set(g.edges[e])}


def _induced(g: Graph, verts: set[int]) -> tuple[Graph, list[int]]:
    """G[verts] on the full vertex range (others isolated); returns local->global ids."""
    kept = [e for e, (u, v) in enumerate(g.edges) if u in verts and v in verts]
    return Graph(g.n, [g.edges[e] for e in kept]), kept


def side_bridges(g: Graph, verts: set[int]) -> set[int]:
    h, back = _induced(g, verts)
    return {back[e] for e in _bridges(h.n, h._adj)}


def predicate_asymmetric_facet(g: Graph, partition: CoparallelPartition, cut: CutSet) -> bool:
    """Every bridge of either shore shares a coparallel class with a cut edge."""
    cut_classes = {partition.class_of[e] for e in cut.cut_edges}
    other = set(range(g.n)) - cut.side
    for b in side_bridges(g, set(cut.side)) | side_bridges(g, other):
        if partition.class_of.get(b) not in cut_classes:
            return False
    return True


def predicate_connectivity_facet(g: Graph, cut: CutSet, e1: int, e2: int) -> bool:
    """Condition (i) or (ii) of the connectivity facet characterization."""
    s = set(cut.side)
    t = set(range(g.n)) - s
    bs, bt = side_bridges(g, s), side_bridges(g, t)
    e1_bridge, e2_bridge = e1 in bs, e2 in bt
    if e1_bridge or e2_bridge:
        return len(cut.cut_edges) == 2
    for f in bs | bt:
        if len(predicate_delta_Wf(g, cut, e1, e2, f)) != 1:
            return False
    return True


# ---------------------------------------------------------------- theorem checks


THEOREMS = ("box_lower", "box_upper", "asymmetric", "connectivity", "coparallel", "odd_star")


@dataclass
class TheoremResult:
    name: str
    checked: int = 0
    facets: int = 0
    skipped: int = 0
    mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


@dataclass
class TheoremReport:
    graph: Graph
    polytope_dim: int
    vertex_count: int
    results: dict[str, TheoremResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())


def _record(res: TheoremResult, rep: FaceReport, expected: bool, witness: dict) -> None:
    res.checked += 1
    res.facets += rep.is_facet
    if not rep.valid or rep.is_facet != expected:
        res.mismatches.append(
            dict(witness, expected=expected, valid=rep.valid, face_dim=rep.face_dim)
        )


def check_theorems(
    g: Graph,
    families: Iterable[str] = THEOREMS,
    vs: VertexSet2EC | None = None,
    max_rows: int | None = None,
) -> TheoremReport:
    """Compare facet status of every row instance with its characterization.

    Non-minimal cuts are skipped (a row on a smaller cut dominates them).
    ``max_rows`` caps instances per family for large graphs.
    """
    if not is_two_edge_connected(g):
        raise ValueError("graph must be 2-edge-connected")
    families = tuple(families)
    unknown = set(families) - set(THEOREMS)
    if unknown:
        raise ValueError(f"unknown theorem families {sorted(unknown)}")
    vs = vs or enumerate_2ec(g)
    partition = coparallel_partition(g)
    results = {name: TheoremResult(name) for name in families}

    def full(name):
        return max_rows is not None and results[name].checked >= max_rows

    if "box_lower" in results:
        for e in range(g.m):
            if full("box_lower"):
                break
            rep = face_report(vs, make_box_lower(g, e))
            _record(results["box_lower"], rep, not predicate_in_3cut(g, e), {"e": e})
    if "box_upper" in results:
        for e in range(g.m):
            if full("box_upper"):
                break
            _record(results["box_upper"], face_report(vs, make_box_upper(g, e)), True, {"e": e})
    if "asymmetric" in results or "connectivity" in results:
        for rec in cut_table(g):
            cut = rec.as_cutset()
            if not rec.minimal:
                for name in ("asymmetric", "connectivity"):
                    if name in results:
                        results[name].skipped += 1
                continue
            if "asymmetric" in results and not full("asymmetric"):
                expected = rec.size >= 3 and predicate_asymmetric_facet(g, partition, cut)
                for e in sorted(cut.cut_edges):
                    rep = face_report(vs, make_asymmetric(g, cut, e))
                    _record(results["asymmetric"], rep, expected, {"side": sorted(cut.side), "e": e})
            if "connectivity" in results and not full("connectivity"):
                inner = [e for e in range(g.m) if rec.in_mask >> e & 1]
                outer = [e for e in range(g.m) if rec.out_mask >> e & 1]
                for e1, e2 in itertools.product(inner, outer):
                    rep = face_report(vs, make_connectivity(g, cut, e1, e2))
                    expected = predicate_connectivity_facet(g, cut, e1, e2)
                    _record(
                        results["connectivity"], rep, expected,
                        {"side": sorted(cut.side), "e1": e1, "e2": e2},
                    )
    if "coparallel" in results:
        comps_by_class = edge_components_after_class_removal(g, partition)
        for ci, comps in enumerate(comps_by_class):
            if len(comps) < 3:
                continue
            for f in partition.classes[ci]:
                for choice in itertools.product(*[sorted(c) for c in comps]):
                    if full("coparallel"):
                        break
                    row = make_coparallel_class(g, partition, ci, f, choice, comps)
                    _record(
                        results["coparallel"], face_report(vs, row), True,
                        {"class": ci, "f": f, "e": choice},
                    )
    if "odd_star" in results and g.is_complete() and g.n >= 4:
        for row in enumerate_odd_stars(g):
            if full("odd_star"):
                break
            _record(results["odd_star"], face_report(vs, row), True, dict(row.provenance))
    return TheoremReport(g, vs.dimension, len(vs), results)


def degenerate_coparallel_rows(g: Graph) -> list[tuple[LinearInequality, LinearInequality | None]]:
    """Coparallel rows with r = 1 or 2, each paired with its equivalent row.

    r = 1 pairs with the box row x_e1 <= 1; r = 2 pairs with the connectivity
    row on the 2-cut {f, f'} separating e1 from e2.
    """
    partition = coparallel_partition(g)
    out = []
    for ci, comps in enumerate(edge_components_after_class_removal(g, partition)):
        if len(comps) > 2 or not comps:
            continue
        cls = partition.classes[ci]
        for f in cls:
            for choice in itertools.product(*[sorted(c) for c in comps]):
                row = make_coparallel_class(g, partition, ci, f, choice, comps)
                if len(comps) == 1:
                    out.append((row, make_box_upper(g, choice[0])))
                    continue
                e1, e2 = choice
                for f2 in cls:
                    if f2 == f:
                        continue
                    removed = {f, f2}
                    pieces = _components(g.n, g._adj, lambda e: e not in removed)
                    side = next(p for p in pieces if g.edges[e1][0] in p)
                    if g.edges[e2][0] in side:
                        continue
                    out.append((row, make_connectivity(g, delta(g, side), e1, e2)))
                    break
    return out
