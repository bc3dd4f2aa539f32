"""Bounded-variable revised primal simplex for ``max c.x  s.t.  A x <= b, lo <= x <= hi``.

Dense, with an explicit basis inverse updated by rank-one pivots and
refactorized periodically.  Pricing is Dantzig's rule; after a run of
degenerate pivots it switches to Bland's rule, which cannot cycle.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PRIMAL_TOL = 1e-9
DUAL_TOL = 1e-9
PIVOT_TOL = 1e-9
REFACTOR_EVERY = 64
DEGENERATE_SWITCH = 50

AT_LOWER, AT_UPPER, BASIC = 0, 1, 2


class LpIterationLimit(RuntimeError):
    pass


class LpUnbounded(RuntimeError):
    pass


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible"
    value: float = float("nan")
    x: np.ndarray | None = None
    iterations: int = 0
    duals: np.ndarray | None = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Simplex:
    """Columns: n structurals, m slacks (+e_i), then artificials (-e_i)."""

    def __init__(self, c, A, b, lo, hi, max_iter):
        self.m, self.n = A.shape
        self.A = A
        self.b = b
        art_rows = []
        x_struct = lo.copy()
        slack = b - A @ x_struct if self.m else np.zeros(0)
        for i in range(self.m):
            if slack[i] < -PRIMAL_TOL:
                art_rows.append(i)
        self.art_rows = np.array(art_rows, dtype=int)
        k = len(art_rows)
        self.N = self.n + self.m + k
        self.lo = np.concatenate([lo, np.zeros(self.m), np.zeros(k)])
        self.hi = np.concatenate([hi, np.full(self.m, np.inf), np.full(k, np.inf)])
        self.x = np.zeros(self.N)
        self.x[: self.n] = x_struct
        self.status = np.full(self.N, AT_LOWER, dtype=np.int8)
        self.basis = np.arange(self.n, self.n + self.m)
        is_art = np.zeros(self.m, dtype=bool)
        is_art[self.art_rows] = True
        for j, i in enumerate(self.art_rows):
            self.basis[i] = self.n + self.m + j
        self.x[self.n : self.n + self.m] = np.where(is_art, 0.0, slack)
        for j, i in enumerate(self.art_rows):
            self.x[self.n + self.m + j] = -slack[i]
        self.status[self.basis] = BASIC
        self.max_iter = max_iter
        self.iterations = 0
        self.refactor()

    # -- column access -------------------------------------------------
    def column(self, j: int) -> np.ndarray:
        if j < self.n:
            return self.A[:, j]
        col = np.zeros(self.m)
        if j < self.n + self.m:
            col[j - self.n] = 1.0
        else:
            col[self.art_rows[j - self.n - self.m]] = -1.0
        return col

    def refactor(self) -> None:
        if self.m == 0:
            self.Binv = np.zeros((0, 0))
            return
        B = np.column_stack([self.column(j) for j in self.basis])
        self.Binv = np.linalg.inv(B)
        # recompute basic values from nonbasic ones
        nonbasic = self.status != BASIC
        rhs = self.b.copy()
        xs = np.where(nonbasic[: self.n], self.x[: self.n], 0.0)
        rhs -= self.A @ xs
        idx = np.flatnonzero(nonbasic[self.n :])
        for j in idx + self.n:
            if self.x[j] != 0.0:
                rhs -= self.column(j) * self.x[j]
        self.x[self.basis] = self.Binv @ rhs

    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        y = cost[self.basis] @ self.Binv if self.m else np.zeros(0)
        d = np.empty(self.N)
        d[: self.n] = cost[: self.n] - (y @ self.A if self.m else 0.0)
        d[self.n : self.n + self.m] = cost[self.n : self.n + self.m] - y
        k = self.N - self.n - self.m
        if k:
            d[self.n + self.m :] = cost[self.n + self.m :] + y[self.art_rows]
        d[self.basis] = 0.0
        return d

    # -- main loop -----------------------------------------------------
    def run(self, cost: np.ndarray) -> None:
        degenerate = 0
        since_refactor = 0
        while True:
            if self.iterations >= self.max_iter:
                raise LpIterationLimit(f"simplex exceeded {self.max_iter} iterations")
            d = self.reduced_costs(cost)
            movable = self.hi > self.lo
            up = (self.status == AT_LOWER) & (d > DUAL_TOL) & movable
            down = (self.status == AT_UPPER) & (d < -DUAL_TOL) & movable
            cand = np.flatnonzero(up | down)
            if cand.size == 0:
                return
            bland = degenerate >= DEGENERATE_SWITCH
            q = int(cand[0]) if bland else int(cand[np.argmax(np.abs(d[cand]))])
            direction = 1.0 if up[q] else -1.0
            col = self.Binv @ self.column(q) if self.m else np.zeros(0)
            delta = direction * col  # basic values move by -t * delta
            t_best = self.hi[q] - self.lo[q]
            leave = -1
            leave_to_upper = False
            xb = self.x[self.basis]
            if self.m:
                hib = self.hi[self.basis]
                pos = delta > PIVOT_TOL
                neg = (delta < -PIVOT_TOL) & np.isfinite(hib)
                ratio = np.full(self.m, np.inf)
                ratio[pos] = (xb[pos] - self.lo[self.basis][pos]) / delta[pos]
                ratio[neg] = (hib[neg] - xb[neg]) / (-delta[neg])
                np.maximum(ratio, 0.0, out=ratio)
                t_min = ratio.min()
                if t_min < t_best - 1e-12:
                    ties = np.flatnonzero(ratio <= t_min + 1e-12)
                    if bland:
                        leave = int(ties[np.argmin(self.basis[ties])])
                    else:
                        leave = int(ties[np.argmax(np.abs(delta[ties]))])
                    t_best = ratio[leave]
                    leave_to_upper = bool(neg[leave])
            if not np.isfinite(t_best):
                raise LpUnbounded("objective unbounded")
            self.iterations += 1
            degenerate = degenerate + 1 if t_best <= 1e-12 else 0
            self.x[q] += direction * t_best
            if self.m:
                self.x[self.basis] = xb - t_best * delta
            if leave < 0:
                self.status[q] = AT_UPPER if direction > 0 else AT_LOWER
                continue
            out = self.basis[leave]
            self.x[out] = self.hi[out] if leave_to_upper else self.lo[out]
            self.status[out] = AT_UPPER if leave_to_upper else AT_LOWER
            self.status[q] = BASIC
            self.basis[leave] = q
            piv = col[leave]
            row = self.Binv[leave] / piv
            self.Binv -= np.outer(col, row)
            self.Binv[leave] = row
            since_refactor += 1
            if since_refactor >= REFACTOR_EVERY:
                self.refactor()
                since_refactor = 0


def solve_dense(c, A, b, lo, hi, max_iter: int | None = None) -> LpResult:
    """Maximize ``c.x`` over ``A x <= b`` and bounds.  Returns status and point."""
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    A = np.asarray(A, dtype=float).reshape(-1, n)
    b = np.asarray(b, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if np.any(lo > hi + PRIMAL_TOL):
        return LpResult("infeasible")
    if max_iter is None:
        max_iter = 50 * (A.shape[0] + n) + 1000
    sx = _Simplex(c, A, b, lo, hi, max_iter)
    k = sx.N - sx.n - sx.m
    if k:
        phase1 = np.zeros(sx.N)
        phase1[sx.n + sx.m :] = -1.0
        sx.run(phase1)
        sx.refactor()
        if sx.x[sx.n + sx.m :].sum() > 1e-7:
            return LpResult("infeasible", iterations=sx.iterations)
        sx.hi[sx.n + sx.m :] = 0.0
    cost = np.zeros(sx.N)
    cost[:n] = c
    sx.run(cost)
    sx.refactor()
    x = np.clip(sx.x[:n], lo, hi)
    y = cost[sx.basis] @ sx.Binv if sx.m else np.zeros(0)
    return LpResult("optimal", float(c @ x), x, sx.iterations, y)
