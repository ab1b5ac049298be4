"""Region-growing partitioner and its recursive (hierarchical) use.

Seeds are placed farthest-point-first, regions grow concurrently best-first
under a size cap, every seed is moved once to its region's BFS center and the
regions are regrown. A short boundary refinement pass (Fiduccia-Mattheyses
style, with rollback to the best prefix) then lowers the cut while keeping
every region inside the size window.
"""

from __future__ import annotations

import math
import random
from collections import deque
from heapq import heappop, heappush
from typing import Mapping

from ..errors import InvalidPartitionError
from ..graph import INF, Graph
from .result import HIERARCHICAL, PLANAR, HierarchyNode, PartitionResult, from_assignment

Adj = Mapping[int, Mapping[int, int]]


def _restricted(g: Graph, verts: list[int]) -> dict[int, dict[int, int]]:
    vs = set(verts)
    return {v: {u: w for u, w in g.adj[v].items() if u in vs} for v in verts}


def _farthest_seeds(adj: Adj, verts: list[int], k: int, rng: random.Random) -> list[int]:
    start = verts[rng.randrange(len(verts))]
    seeds = [start]
    best = {v: INF for v in verts}
    while len(seeds) < k:
        # incremental multi-source distances from the newest seed
        s = seeds[-1]
        best[s] = 0
        heap = [(0, s)]
        while heap:
            d, v = heappop(heap)
            if d > best[v]:
                continue
            for u, w in adj[v].items():
                nd = d + w
                if nd < best[u]:
                    best[u] = nd
                    heappush(heap, (nd, u))
        chosen = set(seeds)
        far, far_d = None, -1
        for v in verts:
            if v not in chosen and best[v] > far_d:
                far, far_d = v, best[v]
        seeds.append(far)
    return seeds


def _grow(adj: Adj, verts: list[int], seeds: list[int], cap: int) -> dict[int, int]:
    part: dict[int, int] = {}
    size = [0] * len(seeds)
    heap = [(0, v, r) for r, v in enumerate(seeds)]
    heap.sort()
    while heap:
        d, v, r = heappop(heap)
        if v in part or size[r] >= cap:
            continue
        part[v] = r
        size[r] += 1
        for u, w in adj[v].items():
            if u not in part:
                heappush(heap, (d + w, u, r))
    left = [v for v in verts if v not in part]
    while left:
        progress = False
        rest = []
        for v in left:
            cands = {part[u] for u in adj[v] if u in part}
            if not cands:
                rest.append(v)
                continue
            roomy = [r for r in cands if size[r] < cap]
            r = min(roomy or cands, key=lambda r: (size[r], r))
            part[v] = r
            size[r] += 1
            progress = True
        left = rest
        if not progress:
            # unreachable component: give it to the smallest region wholesale
            v = left[0]
            r = min(range(len(seeds)), key=lambda r: (size[r], r))
            part[v] = r
            size[r] += 1
            left = left[1:]
    return part


def _bfs_far(adj: Adj, src: int, members: set[int]) -> tuple[int, dict[int, int | None]]:
    prev: dict[int, int | None] = {src: None}
    q = deque([src])
    last = src
    while q:
        v = q.popleft()
        last = v
        for u in sorted(adj[v]):
            if u in members and u not in prev:
                prev[u] = v
                q.append(u)
    return last, prev


def _center(adj: Adj, seed: int, members: set[int]) -> int:
    """Approximate unweighted center: midpoint of a double-sweep diameter path."""
    a, _ = _bfs_far(adj, seed, members)
    b, prev = _bfs_far(adj, a, members)
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[len(path) // 2]


def _rebalance(adj: Adj, part: dict[int, int], k: int, lo: int) -> None:
    """Pull vertices into regions smaller than ``lo`` from larger neighbors."""
    size = [0] * k
    for r in part.values():
        size[r] += 1
    for r in range(k):
        while size[r] < lo:
            best = None
            for v, a in part.items():
                if a == r or size[a] <= lo:
                    continue
                into = sum(1 for u in adj[v] if part[u] == r)
                if not into:
                    continue
                stay = sum(1 for u in adj[v] if part[u] == a)
                key = (into - stay, -v)
                if best is None or key > best[0]:
                    best = (key, v)
            if best is None:
                break
            v = best[1]
            size[part[v]] -= 1
            part[v] = r
            size[r] += 1


def _refine(adj: Adj, part: dict[int, int], k: int, lo: int, hi: int,
            passes: int = 4) -> None:
    size = [0] * k
    for r in part.values():
        size[r] += 1

    def best_move(v: int):
        a = part[v]
        cnt: dict[int, int] = {}
        for u in adj[v]:
            r = part[u]
            cnt[r] = cnt.get(r, 0) + 1
        inside = cnt.get(a, 0)
        best = None
        if size[a] <= lo:
            return None
        for b, c in cnt.items():
            if b == a or size[b] >= hi:
                continue
            key = (c - inside, size[a] - size[b] - 1, -b)
            if best is None or key > best[0]:
                best = (key, b)
        return best

    for _ in range(passes):
        heap = []
        for v in part:
            m = best_move(v)
            if m is not None:
                heappush(heap, (-m[0][0], v))
        locked: set[int] = set()
        moves: list[tuple[int, int, int]] = []
        cut_gain = bal_gain = 0
        best_score, best_len = (0, 0), 0
        idle = 0
        patience = 50 + len(part) // 50
        while heap and idle < patience:
            neg, v = heappop(heap)
            if v in locked:
                continue
            m = best_move(v)
            if m is None:
                continue
            (g_cut, g_bal, _), b = m
            if g_cut != -neg:
                heappush(heap, (-g_cut, v))
                continue
            a = part[v]
            part[v] = b
            size[a] -= 1
            size[b] += 1
            locked.add(v)
            moves.append((v, a, b))
            cut_gain += g_cut
            bal_gain += g_bal
            if (cut_gain, bal_gain) > best_score:
                best_score, best_len = (cut_gain, bal_gain), len(moves)
                idle = 0
            else:
                idle += 1
            for u in adj[v]:
                if u not in locked:
                    mu = best_move(u)
                    if mu is not None:
                        heappush(heap, (-mu[0][0], u))
        for v, a, b in reversed(moves[best_len:]):
            part[v] = a
            size[b] -= 1
            size[a] += 1
        if best_len == 0:
            break


def _split(adj: Adj, verts: list[int], k: int, rng: random.Random,
           lo: int, hi: int) -> dict[int, int]:
    seeds = _farthest_seeds(adj, verts, k, rng)
    part = _grow(adj, verts, seeds, hi)
    centers = []
    for r in range(k):
        members = {v for v, x in part.items() if x == r}
        centers.append(_center(adj, seeds[r], members) if members else seeds[r])
    if len(set(centers)) == k:
        part = _grow(adj, verts, centers, hi)
    _rebalance(adj, part, k, lo)
    _refine(adj, part, k, lo, hi)
    return part


def partition_growing(g: Graph, k: int, seed: int = 0) -> PartitionResult:
    """Partition ``g`` into ``k`` regions with sizes within a factor 2 of ``n/k``."""
    if k < 2 or k > g.n:
        raise InvalidPartitionError(f"invalid k={k} for n={g.n} (need 2 <= k <= n)")
    verts = list(range(g.n))
    adj = g.adj
    lo = max(1, math.ceil(g.n / (2 * k)))
    hi = math.ceil(2 * g.n / k)
    part = _split(dict(enumerate(adj)), verts, k, random.Random(seed), lo, hi)
    assignment = [part[v] for v in verts]
    return from_assignment(g, assignment, PLANAR, {"method": "growing", "seed": seed})


def partition_hierarchical(g: Graph, fanout: int = 4, leaf_size: int = 128,
                           seed: int = 0) -> PartitionResult:
    """Recursive ``fanout``-way splitting until every leaf has ``<= leaf_size`` vertices.

    Children are balanced to ``ceil(size / fanout)`` so depth follows the
    arithmetic of repeated division.
    """
    if fanout < 2:
        raise InvalidPartitionError("fanout must be >= 2")
    if leaf_size < 1:
        raise InvalidPartitionError("leaf size must be >= 1")
    rng = random.Random(seed)

    def build(verts: list[int], level: int) -> HierarchyNode:
        node = HierarchyNode(verts, level)
        if len(verts) <= leaf_size:
            return node
        k = min(fanout, len(verts))
        adj = _restricted(g, verts)
        hi = math.ceil(len(verts) / k)
        lo = max(1, len(verts) // k - 0)
        lo = min(lo, hi)
        part = _split(adj, verts, k, rng, lo, hi)
        groups: list[list[int]] = [[] for _ in range(k)]
        for v in verts:
            groups[part[v]].append(v)
        node.children = [build(grp, level + 1) for grp in groups if grp]
        return node

    root = build(list(range(g.n)), 0)
    assignment = [0] * g.n
    for i, leaf in enumerate(root.leaves()):
        leaf.leaf_id = i
        for v in leaf.vertices:
            assignment[v] = i
    return from_assignment(g, assignment, HIERARCHICAL,
                           {"method": "hierarchical", "fanout": fanout, "leaf_size": leaf_size,
                            "seed": seed, "depth": root.depth}, hierarchy=root)
