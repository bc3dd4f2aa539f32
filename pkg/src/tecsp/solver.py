"""Branch-and-cut for the maximum-weight 2-edge-connected subgraph problem."""
from __future__ import annotations

import enum
import heapq
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .copar import coparallel_partition, edge_components_after_class_removal
from .graph import EdgeSubgraph, Graph, _bridges, _components, edge_set_is_2ec
from .inequalities import Family, LinearInequality, enumerate_odd_stars
from .lp import LpResult, solve_dense
from .separation import separate_asymmetric, separate_connectivity, separate_coparallel


class Model(enum.Enum):
    BASIC = "basic"
    STRENGTHENED = "strengthened"


class SeparationMode(enum.Enum):
    INTEGER = "integer"
    FRACTIONAL = "fractional"


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    TIME_LIMIT = "TimeLimit"


VARIANTS = [(m, s) for m in Model for s in SeparationMode]


@dataclass(frozen=True)
class ModelConfig:
    model: Model = Model.BASIC
    separation: SeparationMode = SeparationMode.INTEGER
    time_limit: float = 600.0
    cut_cap_per_round: int = 20
    feasibility_tol: float = 1e-9
    integrality_tol: float = 1e-6
    violation_tol: float = 1e-6
    seed: int = 0
    heuristic_connectivity: bool = False

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.cut_cap_per_round < 1:
            raise ValueError("cut_cap_per_round must be positive")
        for name in ("feasibility_tol", "integrality_tol", "violation_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class SolveStats:
    nodes: int = 0
    lp_solves: int = 0
    separation_rounds: int = 0
    cuts: dict[str, int] = field(default_factory=lambda: {f.value: 0 for f in Family})
    seconds: float = 0.0
    root_bound: float | None = None

    def merge(self, other: "SolveStats") -> None:
        self.nodes += other.nodes
        self.lp_solves += other.lp_solves
        self.separation_rounds += other.separation_rounds
        for k, v in other.cuts.items():
            self.cuts[k] += v


@dataclass
class SolveReport:
    incumbent: EdgeSubgraph
    objective: int
    dual_bound: Fraction
    status: Status
    stats: SolveStats


class CutPool:
    """Globally valid rows, deduplicated by canonical form, as a dense matrix."""

    def __init__(self, m: int):
        self.m = m
        self.rows: list[LinearInequality] = []
        self._keys: set = set()
        self._A = np.zeros((16, m))
        self._b = np.zeros(16)

    def __len__(self) -> int:
        return len(self.rows)

    def insert(self, row: LinearInequality) -> bool:
        if row.key in self._keys:
            return False
        k = len(self.rows)
        if k == self._A.shape[0]:
            self._A = np.vstack([self._A, np.zeros_like(self._A)])
            self._b = np.concatenate([self._b, np.zeros_like(self._b)])
        for e, c in row.coefficients:
            self._A[k, e] = float(c)
        self._b[k] = float(row.rhs)
        self._keys.add(row.key)
        self.rows.append(row)
        return True

    @property
    def A(self) -> np.ndarray:
        return self._A[: len(self.rows)]

    @property
    def b(self) -> np.ndarray:
        return self._b[: len(self.rows)]


def cut_pool_insert(pool: CutPool, row: LinearInequality) -> bool:
    return pool.insert(row)


@dataclass
class LpModel:
    """Objective, shared cut pool and per-node bounds.

    Only an active subset of pool rows enters each simplex call; rows violated
    by the returned point are activated and the LP is re-solved, so the final
    point satisfies the whole pool.
    """

    objective: Sequence[int]
    pool: CutPool
    lo: np.ndarray
    hi: np.ndarray
    active: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))
    feasibility_tol: float = 1e-9


def lp_solve(model: LpModel) -> LpResult:
    pool = model.pool
    if model.active.shape[0] < len(pool):
        grown = np.ones(len(pool), dtype=bool)
        grown[: model.active.shape[0]] = model.active
        model.active = grown
    c = np.asarray(model.objective, dtype=float)
    A, b = pool.A, pool.b
    iterations = 0
    while True:
        idx = np.flatnonzero(model.active)
        res = solve_dense(c, A[idx], b[idx], model.lo, model.hi)
        iterations += res.iterations
        if not res.optimal or len(pool) == 0:
            res.iterations = iterations
            return res
        slack = b - A @ res.x
        violated = slack < -model.feasibility_tol
        if not violated.any():
            res.iterations = iterations
            return res
        model.active |= violated


# ---------------------------------------------------------------- preprocessing


def preprocess(g: Graph, w: Sequence[int]) -> list[tuple[Graph, list[int], list[int]]]:
    """Bridgeless connected components with edges, as (graph, weights, edge back-map)."""
    if len(w) != g.m:
        raise ValueError("one weight per edge required")
    dead = set(_bridges(g.n, g._adj))
    while True:
        more = _bridges(g.n, g._adj, dead) - dead
        if not more:
            break
        dead |= more
    alive = lambda e: e not in dead  # noqa: E731
    out = []
    for comp in _components(g.n, g._adj, alive):
        local = {v: i for i, v in enumerate(comp)}
        eids = sorted({e for v in comp for _, e in g.adjacency(v) if e not in dead})
        if not eids:
            continue
        h = Graph(len(comp), [(local[g.edges[e][0]], local[g.edges[e][1]]) for e in eids])
        out.append((h, [int(w[e]) for e in eids], eids))
    return out


# ---------------------------------------------------------------- branch and cut


class _Deadline:
    def __init__(self, seconds: float):
        self.end = time.monotonic() + seconds

    def expired(self) -> bool:
        return time.monotonic() >= self.end


class _ComponentSolver:
    def __init__(self, g: Graph, w: Sequence[int], cfg: ModelConfig, deadline: _Deadline):
        self.g = g
        self.w = [int(v) for v in w]
        self.cfg = cfg
        self.deadline = deadline
        self.stats = SolveStats()
        self.pool = CutPool(g.m)
        self.strengthened = cfg.model is Model.STRENGTHENED
        if self.strengthened:
            self.partition = coparallel_partition(g)
            self.class_components = edge_components_after_class_removal(g, self.partition)
            if g.is_complete() and g.n >= 4:
                for row in enumerate_odd_stars(g):
                    if self.pool.insert(row):
                        self.stats.cuts[Family.ODD_STAR.value] += 1
        self.best_value = 0
        self.best_edges: list[int] = []
        self.active = np.zeros(0, dtype=bool)

    def _prunable(self, bound: float) -> bool:
        return math.floor(bound + self.cfg.integrality_tol) <= self.best_value

    def _add_rows(self, results) -> int:
        added = 0
        for res in results:
            taken = 0
            for row, _ in res.violated:
                if taken >= self.cfg.cut_cap_per_round:
                    break
                if self.pool.insert(row):
                    self.stats.cuts[row.family.value] += 1
                    added += 1
                    taken += 1
        return added

    def _separate(self, x: list) -> list:
        tol = self.cfg.violation_tol if x and isinstance(x[0], float) else 0
        out = [
            separate_asymmetric(self.g, x, tol),
            separate_connectivity(self.g, x, tol, heuristic=self.cfg.heuristic_connectivity),
        ]
        if self.strengthened:
            out.append(
                separate_coparallel(self.g, self.partition, x, tol, self.class_components)
            )
        self.stats.separation_rounds += 1
        return out

    def _process(self, lo: np.ndarray, hi: np.ndarray, depth: int):
        """Cut loop at one node.  Returns ``(bound, branch_edge)``; edge -1 means done."""
        while True:
            model = LpModel(self.w, self.pool, lo, hi, self.active, self.cfg.feasibility_tol)
            res = lp_solve(model)
            self.active = model.active
            self.stats.lp_solves += 1
            if not res.optimal:
                return -math.inf, -1
            bound = res.value
            if self._prunable(bound):
                return bound, -1
            x = res.x
            frac = np.abs(x - np.rint(x)) > self.cfg.integrality_tol
            if not frac.any():
                xr = [int(v) for v in np.rint(x)]
                support = [e for e in range(self.g.m) if xr[e]]
                if edge_set_is_2ec(self.g, support):
                    value = sum(self.w[e] for e in support)
                    if value > self.best_value:
                        self.best_value = value
                        self.best_edges = support
                    return bound, -1
                if self._add_rows(self._separate(xr)) == 0:
                    raise RuntimeError("integral point outside the 2EC set but no new cut found")
                continue
            if self.cfg.separation is SeparationMode.FRACTIONAL and not self.deadline.expired():
                xf = [float(min(1.0, max(0.0, v))) for v in x]
                if self._add_rows(self._separate(xf)):
                    continue
            scores = np.where(frac, np.abs(x - 0.5), np.inf)
            return bound, int(np.argmin(scores))

    def run(self) -> tuple[bool, float]:
        """Search the tree; returns (finished, upper bound)."""
        m = self.g.m
        root_bound = float(sum(max(v, 0) for v in self.w))
        counter = 0
        heap = [(-root_bound, 0, counter, np.zeros(m), np.ones(m))]
        while heap:
            negb, negdepth, _, lo, hi = heapq.heappop(heap)
            if self._prunable(-negb):
                continue
            if self.deadline.expired():
                heapq.heappush(heap, (negb, negdepth, -1, lo, hi))
                break
            self.stats.nodes += 1
            bound, e = self._process(lo, hi, -negdepth)
            if self.stats.root_bound is None:
                self.stats.root_bound = bound
            if e < 0:
                continue
            for val in (1.0, 0.0):
                clo, chi = lo.copy(), hi.copy()
                clo[e] = chi[e] = val
                counter += 1
                heapq.heappush(heap, (-bound, negdepth - 1, counter, clo, chi))
        open_bounds = [-item[0] for item in heap if not self._prunable(-item[0])]
        if not open_bounds:
            return True, float(self.best_value)
        return False, max(max(open_bounds), float(self.best_value))


def solve(g: Graph, w: Sequence[int], cfg: ModelConfig | None = None) -> SolveReport:
    """Maximum-weight 2-edge-connected subgraph of ``g`` under integer weights ``w``."""
    cfg = cfg or ModelConfig()
    if len(w) != g.m:
        raise ValueError("one weight per edge required")
    if any(int(v) != v for v in w):
        raise ValueError("weights must be integers")
    start = time.monotonic()
    deadline = _Deadline(cfg.time_limit)
    stats = SolveStats()
    best_value, best_edges = 0, []
    bound = 0
    finished = True
    for h, wh, back in preprocess(g, w):
        if deadline.expired():
            finished = False
            bound = max(bound, sum(max(v, 0) for v in wh))
            continue
        cs = _ComponentSolver(h, wh, cfg, deadline)
        done, ub = cs.run()
        stats.merge(cs.stats)
        if stats.root_bound is None or (cs.stats.root_bound or 0) > stats.root_bound:
            stats.root_bound = cs.stats.root_bound
        if cs.best_value > best_value:
            best_value = cs.best_value
            best_edges = [back[e] for e in cs.best_edges]
        finished &= done
        bound = max(bound, math.floor(ub + cfg.integrality_tol))
    if best_edges and not edge_set_is_2ec(g, best_edges):
        raise RuntimeError("incumbent failed 2-edge-connectivity validation")
    stats.seconds = time.monotonic() - start
    status = Status.OPTIMAL if finished else Status.TIME_LIMIT
    dual = Fraction(best_value if finished else max(bound, best_value))
    return SolveReport(EdgeSubgraph.from_edges(g, best_edges), best_value, dual, status, stats)


def root_bounds(g: Graph, w: Sequence[int], cfg: ModelConfig, rounds: int) -> list[float]:
    """LP bound at the root after 0..rounds fractional separation rounds.

    Bridges are not removed; ``g`` should already be bridgeless and connected.
    """
    solver = _ComponentSolver(g, w, cfg, _Deadline(cfg.time_limit))
    lo, hi = np.zeros(g.m), np.ones(g.m)
    trace = []
    for _ in range(rounds + 1):
        model = LpModel(solver.w, solver.pool, lo, hi, solver.active, cfg.feasibility_tol)
        res = lp_solve(model)
        solver.active = model.active
        trace.append(res.value)
        xf = [float(min(1.0, max(0.0, v))) for v in res.x]
        if not solver._add_rows(solver._separate(xf)):
            break
    return trace
