"""Seeded instance generators and the line-oriented instance file format.

File format::

    c optional comment lines anywhere
    p tecs <n> <m>
    e <u> <v> <w>        (m lines, 1-based vertices, integer weight)
"""
from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass
from typing import Union

from .graph import Graph, is_two_edge_connected
from .rng import Xoshiro256, derive_seed

KNN_RETRIES = 100


@dataclass(frozen=True)
class SparsifiedKnn:
    n: int
    k: int
    alpha: float
    weight_lo: int = -5
    weight_hi: int = 6

    def __post_init__(self):
        if self.n < 3 or self.k < 2 or not 0.0 <= self.alpha <= 1.0:
            raise ValueError("need n >= 3, k >= 2 and alpha in [0, 1]")


@dataclass(frozen=True)
class KnCycles:
    ell: int
    weight_lo: int = -5
    weight_hi: int = 6
    size_lo: int = 3
    size_hi: int = 7

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError("need ell >= 2")


@dataclass(frozen=True)
class Complete:
    n: int
    weight_lo: int = -10
    weight_hi: int = 3

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("complete instances need n >= 4")


Kind = Union[SparsifiedKnn, KnCycles, Complete]


@dataclass(frozen=True)
class InstanceSpec:
    kind: Kind
    seed: int = 0

    def describe(self) -> dict:
        return {"kind": type(self.kind).__name__, "seed": self.seed, **asdict(self.kind)}


def _weights(rng: Xoshiro256, m: int, lo: int, hi: int) -> list[int]:
    return [rng.randint(lo, hi) for _ in range(m)]


def _knn_edges(points: list[tuple[float, float]], k: int) -> list[tuple[int, int]]:
    """Symmetrized k-NN edges; distance ties go to the smaller index."""
    n = len(points)
    edges = set()
    for i, (xi, yi) in enumerate(points):
        order = sorted(
            (j for j in range(n) if j != i),
            key=lambda j: ((points[j][0] - xi) ** 2 + (points[j][1] - yi) ** 2, j),
        )
        for j in order[:k]:
            edges.add((min(i, j), max(i, j)))
    return sorted(edges)


def gen_sparsified_knn(spec: InstanceSpec) -> tuple[Graph, list[int]]:
    kind = spec.kind
    if not isinstance(kind, SparsifiedKnn):
        raise TypeError("spec kind must be SparsifiedKnn")
    for attempt in range(KNN_RETRIES):
        rng = Xoshiro256(spec.seed if attempt == 0 else derive_seed(spec.seed, attempt))
        points = [(rng.random(), rng.random()) for _ in range(kind.n)]
        edges = _knn_edges(points, kind.k)
        if is_two_edge_connected(Graph(kind.n, edges)):
            break
    else:
        raise RuntimeError(f"no 2-edge-connected {kind.k}-NN graph after {KNN_RETRIES} draws")
    chosen = rng.sample(range(len(edges)), math.floor(kind.alpha * len(edges)))
    rng.shuffle(chosen)
    alive = set(range(len(edges)))
    for e in chosen:
        alive.discard(e)
        if not is_two_edge_connected(Graph(kind.n, [edges[i] for i in sorted(alive)])):
            alive.add(e)
    g = Graph(kind.n, [edges[i] for i in sorted(alive)])
    return g, _weights(rng, g.m, kind.weight_lo, kind.weight_hi)


def _group_sizes(rng: Xoshiro256, count: int, lo: int, hi: int) -> list[int]:
    """Greedy uniform sizes in [lo, hi]; a short remnant joins the previous group."""
    if count < lo:
        return [count]
    sizes = []
    left = count
    while left > 0:
        s = min(rng.randint(lo, hi), left)
        sizes.append(s)
        left -= s
    if len(sizes) > 1 and sizes[-1] < lo:
        last = sizes.pop()
        sizes[-1] += last
    return sizes


def gen_kn_cycles(spec: InstanceSpec) -> tuple[Graph, list[int]]:
    kind = spec.kind
    if not isinstance(kind, KnCycles):
        raise TypeError("spec kind must be KnCycles")
    rng = Xoshiro256(spec.seed)
    edges: list[tuple[int, int]] = []
    parts: list[list[int]] = []
    n = 0
    for _ in range(kind.ell):
        size = rng.randint(kind.size_lo, kind.size_hi)
        verts = list(range(n, n + size))
        n += size
        edges.extend((u, v) for i, u in enumerate(verts) for v in verts[i + 1 :])
        parts.append(verts)
    while len(parts) > 1:
        rng.shuffle(parts)
        merged = []
        pos = 0
        for size in _group_sizes(rng, len(parts), 3, 7):
            group = parts[pos : pos + size]
            pos += size
            used = set()
            for i in range(len(group)):
                nxt = group[(i + 1) % len(group)]
                while True:
                    v = group[i][rng.randint(0, len(group[i]) - 1)]
                    w = nxt[rng.randint(0, len(nxt) - 1)]
                    key = (min(v, w), max(v, w))
                    if key not in used:
                        break
                used.add(key)
                edges.append(key)
            merged.append([v for part in group for v in part])
        parts = merged
    g = Graph(n, edges)
    return g, _weights(rng, g.m, kind.weight_lo, kind.weight_hi)


def gen_complete(spec: InstanceSpec) -> tuple[Graph, list[int]]:
    kind = spec.kind
    if not isinstance(kind, Complete):
        raise TypeError("spec kind must be Complete")
    rng = Xoshiro256(spec.seed)
    n = kind.n
    g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
    return g, _weights(rng, g.m, kind.weight_lo, kind.weight_hi)


def generate(spec: InstanceSpec) -> tuple[Graph, list[int]]:
    if isinstance(spec.kind, SparsifiedKnn):
        return gen_sparsified_knn(spec)
    if isinstance(spec.kind, KnCycles):
        return gen_kn_cycles(spec)
    if isinstance(spec.kind, Complete):
        return gen_complete(spec)
    raise TypeError(f"unknown instance kind {type(spec.kind).__name__}")


# ---------------------------------------------------------------- file format


class InstanceFormatError(ValueError):
    pass


class MalformedHeader(InstanceFormatError):
    pass


class MalformedLine(InstanceFormatError):
    pass


class DuplicateEdge(InstanceFormatError):
    pass


class VertexOutOfRange(InstanceFormatError):
    pass


class SelfLoop(InstanceFormatError):
    pass


def format_instance(g: Graph, w: list[int], comments: list[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p tecs {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1} {int(wt)}" for (u, v), wt in zip(g.edges, w))
    return "\n".join(lines) + "\n"


def write_instance(path, g: Graph, w: list[int], comments: list[str] = ()) -> None:
    if len(w) != g.m:
        raise ValueError("one weight per edge required")
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write(format_instance(g, w, comments))
    os.replace(tmp, path)


def parse_instance(text: str) -> tuple[Graph, list[int]]:
    header = None
    edges: list[tuple[int, int]] = []
    weights: list[int] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if header is not None or len(parts) != 4 or parts[1] != "tecs":
                raise MalformedHeader(f"line {lineno}: bad header {raw!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise MalformedHeader(f"line {lineno}: bad header {raw!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise MalformedHeader(f"line {lineno}: negative sizes")
            continue
        if parts[0] != "e":
            raise MalformedLine(f"line {lineno}: unknown record {raw!r}")
        if header is None:
            raise MalformedHeader(f"line {lineno}: edge before header")
        if len(parts) != 4:
            raise MalformedLine(f"line {lineno}: expected 'e u v w'")
        try:
            u, v, wt = int(parts[1]), int(parts[2]), int(parts[3])
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-integer field") from None
        n = header[0]
        if not (1 <= u <= n and 1 <= v <= n):
            raise VertexOutOfRange(f"line {lineno}: vertex outside 1..{n}")
        if u == v:
            raise SelfLoop(f"line {lineno}: self-loop at {u}")
        key = (min(u, v) - 1, max(u, v) - 1)
        if key in seen:
            raise DuplicateEdge(f"line {lineno}: duplicate edge {u}-{v}")
        seen.add(key)
        edges.append(key)
        weights.append(wt)
    if header is None:
        raise MalformedHeader("missing 'p tecs n m' header")
    if len(edges) != header[1]:
        raise MalformedLine(f"header promises {header[1]} edges, found {len(edges)}")
    return Graph(header[0], edges), weights


def read_instance(path) -> tuple[Graph, list[int]]:
    with open(path, encoding="ascii") as fh:
        return parse_instance(fh.read())
