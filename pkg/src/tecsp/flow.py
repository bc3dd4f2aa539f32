"""Maximum flow on undirected capacitated graphs (highest-label push-relabel).

Capacities may be floats or exact rationals (``Fraction``/``int``).  With exact
inputs pass ``eps=0`` so every comparison is strict; with floats a small
``eps`` absorbs roundoff.
"""
from __future__ import annotations

from collections import deque
from typing import Sequence


def max_flow_undirected(
    n: int,
    edges: Sequence[tuple[int, int]],
    caps: Sequence,
    s: int,
    t: int,
    eps: float = 0.0,
):
    """Return ``(value, reaches_t)`` for a maximum s-t flow.

    ``reaches_t[v]`` is True when v can still reach t in the final residual
    graph, so ``{v : not reaches_t[v]}`` is the source side of a minimum cut.
    Each undirected edge becomes a pair of opposite arcs that share residual
    capacity (arc ``2i`` is u->v, arc ``2i+1`` is v->u).
    """
    if s == t:
        raise ValueError("source and sink coincide")
    head = [0] * (2 * len(edges))
    res = [0] * (2 * len(edges))
    out: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        c = caps[i]
        head[2 * i], head[2 * i + 1] = v, u
        res[2 * i] = res[2 * i + 1] = c
        out[u].append(2 * i)
        out[v].append(2 * i + 1)

    zero = caps[0] * 0 if len(caps) else 0
    height = _distance_to_sink(n, out, head, res, t, eps)
    height[s] = n
    excess = [zero] * n
    count = [0] * (2 * n + 1)
    for v in range(n):
        if height[v] < n:
            count[height[v]] += 1

    buckets: list[list[int]] = [[] for _ in range(2 * n + 1)]
    active = [False] * n
    top = 0

    for a in out[s]:
        d = res[a]
        if d > eps:
            w = head[a]
            res[a] -= d
            res[a ^ 1] += d
            excess[w] += d
            excess[s] -= d
            if w != t and not active[w] and height[w] < n:
                active[w] = True
                buckets[height[w]].append(w)
                top = max(top, height[w])

    cur = [0] * n
    while top >= 0:
        if not buckets[top]:
            top -= 1
            continue
        v = buckets[top].pop()
        active[v] = False
        if height[v] >= n:
            continue
        # discharge v
        arcs = out[v]
        while excess[v] > eps:
            if cur[v] == len(arcs):
                old = height[v]
                new = 2 * n
                for a in arcs:
                    if res[a] > eps:
                        hw = height[head[a]]
                        if hw + 1 < new:
                            new = hw + 1
                count[old] -= 1
                cur[v] = 0
                if count[old] == 0 and old < n:
                    # gap: everything above old can no longer reach t
                    for u in range(n):
                        if old < height[u] < n:
                            count[height[u]] -= 1
                            height[u] = n
                    height[v] = n
                    break
                height[v] = new
                if new >= n:
                    break
                count[new] += 1
                continue
            a = arcs[cur[v]]
            w = head[a]
            if res[a] > eps and height[v] == height[w] + 1:
                d = excess[v] if excess[v] < res[a] else res[a]
                res[a] -= d
                res[a ^ 1] += d
                excess[v] -= d
                excess[w] += d
                if w != s and w != t and not active[w] and height[w] < n:
                    active[w] = True
                    buckets[height[w]].append(w)
                    if height[w] > top:
                        top = height[w]
            else:
                cur[v] += 1

    reaches = _reaches_sink(n, out, head, res, t, eps)
    return excess[t], reaches


def _distance_to_sink(n, out, head, res, t, eps) -> list[int]:
    dist = [n] * n
    dist[t] = 0
    q = deque([t])
    while q:
        w = q.popleft()
        for a in out[w]:
            u = head[a]
            # arc u->w is a ^ 1
            if dist[u] == n and res[a ^ 1] > eps:
                dist[u] = dist[w] + 1
                q.append(u)
    return dist


def _reaches_sink(n, out, head, res, t, eps) -> list[bool]:
    seen = [False] * n
    seen[t] = True
    q = deque([t])
    while q:
        w = q.popleft()
        for a in out[w]:
            u = head[a]
            if not seen[u] and res[a ^ 1] > eps:
                seen[u] = True
                q.append(u)
    return seen
