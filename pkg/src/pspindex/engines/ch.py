"""Concatenation-based contraction hierarchy with clique fill-in.

Every vertex ``v`` keeps ``up[v]``: its higher-ranked neighbors at contraction
time and the shortcut weights. Because contraction always inserts the full
clique, a shortcut ``(a, b)`` is exactly
``min(original(a, b), min_x up[x][a] + up[x][b])`` over its *supporters* ``x``
(lower vertices with both ``a`` and ``b`` in ``up[x]``). Maintenance recomputes
that formula bottom-up, so no witness searches are ever needed.
"""

from __future__ import annotations

from heapq import heappop, heappush
from typing import Iterable, Mapping, NamedTuple, Sequence

from ..errors import EdgeNotFoundError, NotIndexedError
from ..graph import INF
from .order import MDE, VertexOrder, build_order


class ShortcutChange(NamedTuple):
    u: int
    v: int
    old: int
    new: int


def adjacency_dict(adj) -> dict[int, dict[int, int]]:
    if isinstance(adj, Mapping):
        return {v: dict(n) for v, n in adj.items()}
    return {v: dict(n) for v, n in enumerate(adj)}


class CHIndex:
    def __init__(self, adj, order: VertexOrder | None = None):
        adj = adjacency_dict(adj)
        self.order = order or build_order(adj, MDE)
        self.rank = self.order.rank
        missing = [v for v in adj if v not in self.rank]
        if missing:
            raise ValueError(f"order does not cover vertices {missing[:5]}")
        rank = self.rank
        self.up: dict[int, dict[int, int]] = {v: {} for v in adj}
        self.orig: dict[tuple[int, int], int] = {}
        self.support: dict[tuple[int, int], set[int]] = {}
        self.structure_version = 0
        self._spaces: dict[int, dict[int, int]] = {}
        for u, nbrs in adj.items():
            for v, w in nbrs.items():
                if rank[u] < rank[v]:
                    self.up[u][v] = w
                    self.orig[(u, v)] = w
        up, support = self.up, self.support
        for v in self.order.sequence:
            items = sorted(up[v].items(), key=lambda it: rank[it[0]])
            for i in range(len(items)):
                a, wa = items[i]
                upa = up[a]
                for j in range(i + 1, len(items)):
                    b, wb = items[j]
                    key = (a, b)
                    sup = support.get(key)
                    if sup is None:
                        support[key] = {v}
                    else:
                        sup.add(v)
                    cand = wa + wb
                    cur = upa.get(b)
                    if cur is None or cand < cur:
                        upa[b] = cand if cand < INF else INF

    # ------------------------------------------------------------ queries

    def key(self, u: int, v: int) -> tuple[int, int]:
        return (u, v) if self.rank[u] < self.rank[v] else (v, u)

    def __contains__(self, v: int) -> bool:
        return v in self.rank

    @property
    def vertices(self):
        return self.up.keys()

    def shortcut(self, u: int, v: int) -> int:
        a, b = self.key(u, v)
        return self.up[a].get(b, INF)

    def query(self, s: int, t: int) -> int:
        return ch_query([self.up], s, t)

    def multi_query(self, src: Mapping[int, int], dst: Mapping[int, int]) -> int:
        if not src or not dst:
            return INF
        return ch_search([self.up], src, dst)

    def _space(self, v: int) -> dict[int, int]:
        sp = self._spaces.get(v)
        if sp is None:
            sp = upward_space(self.up, v)
            self._spaces[v] = sp
        return sp

    def one_to_many(self, s: int, targets: Sequence[int]) -> list[int]:
        """Distances from ``s`` to each target, sharing the forward search.

        Upward spaces of targets are memoized until the next update, which
        pays off when the same boundary vertices are asked for repeatedly.
        """
        if s not in self.up:
            raise NotIndexedError(s)
        fwd = self._space(s)
        out = []
        for t in targets:
            if t == s:
                out.append(0)
                continue
            if t not in self.up:
                raise NotIndexedError(t)
            bwd = self._space(t)
            if len(bwd) > len(fwd):
                small, big = fwd, bwd
            else:
                small, big = bwd, fwd
            best = INF
            for v, d in small.items():
                o = big.get(v)
                if o is not None and d + o < best:
                    best = d + o
            out.append(best)
        return out

    # ------------------------------------------------------------ statistics

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_spaces"] = {}
        return state

    def stats(self) -> dict[str, int]:
        return {
            "vertices": len(self.up),
            "shortcuts": sum(len(x) for x in self.up.values()),
            "max_up_degree": max((len(x) for x in self.up.values()), default=0),
        }

    # ------------------------------------------------------------ maintenance

    def _insert_pair(self, a: int, b: int, dirty: set[tuple[int, int]]) -> None:
        """Add a brand-new shortcut slot plus the fill-in it implies."""
        stack = [(a, b)]
        up, support = self.up, self.support
        while stack:
            a, b = stack.pop()
            if b in up[a]:
                continue
            self.structure_version += 1
            up[a][b] = INF
            support.setdefault((a, b), set())
            dirty.add((a, b))
            for y in list(up[a]):
                if y == b:
                    continue
                k = self.key(b, y)
                support.setdefault(k, set()).add(a)
                dirty.add(k)
                if k[1] not in up[k[0]]:
                    stack.append(k)

    def update(self, changes: Iterable[tuple[int, int, int]]) -> list[ShortcutChange]:
        """Apply ``(u, v, new_weight)`` edge changes; report changed shortcuts.

        An unknown pair is inserted as a new edge (symbolic fill-in included).
        """
        self._spaces.clear()
        dirty: set[tuple[int, int]] = set()
        for u, v, w in changes:
            if u not in self.rank or v not in self.rank:
                raise EdgeNotFoundError(f"({u},{v}) not indexed")
            a, b = self.key(u, v)
            if b not in self.up[a]:
                if w >= INF:
                    continue
                self._insert_pair(a, b, dirty)
            self.orig[(a, b)] = w if w < INF else INF
            dirty.add((a, b))
        return self._repair(dirty)

    def _repair(self, dirty: set[tuple[int, int]]) -> list[ShortcutChange]:
        rank, up, support, orig = self.rank, self.up, self.support, self.orig
        heap = [(rank[a], rank[b], a, b) for a, b in dirty]
        heap.sort()
        pending = set(dirty)
        report = []
        while heap:
            _, _, a, b = heappop(heap)
            pending.discard((a, b))
            new = orig.get((a, b), INF)
            for x in support.get((a, b), ()):
                ux = up[x]
                c = ux[a] + ux[b]
                if c < new:
                    new = c
            upa = up[a]
            old = upa[b]
            if new == old:
                continue
            upa[b] = new
            report.append(ShortcutChange(a, b, old, new))
            for y in upa:
                if y == b:
                    continue
                k = (b, y) if rank[b] < rank[y] else (y, b)
                if k not in pending:
                    pending.add(k)
                    heappush(heap, (rank[k[0]], rank[k[1]], k[0], k[1]))
        return report


def upward_space(up: Mapping[int, Mapping[int, int]], s: int) -> dict[int, int]:
    """Upward Dijkstra from ``s``; returns settled distances."""
    dist = {s: 0}
    heap = [(0, s)]
    done: dict[int, int] = {}
    while heap:
        d, v = heappop(heap)
        if v in done:
            continue
        done[v] = d
        for u, w in up[v].items():
            nd = d + w
            if nd < dist.get(u, INF):
                dist[u] = nd
                heappush(heap, (nd, u))
    return done


def ch_query(ups: Sequence[Mapping[int, Mapping[int, int]]], s: int, t: int) -> int:
    """Bidirectional upward search over the union of several label sets."""
    if s == t:
        if not any(s in u for u in ups):
            raise NotIndexedError(s)
        return 0
    for v in (s, t):
        if not any(v in u for u in ups):
            raise NotIndexedError(v)
    return ch_search(ups, {s: 0}, {t: 0})


def ch_search(ups: Sequence[Mapping[int, Mapping[int, int]]],
              src: Mapping[int, int], dst: Mapping[int, int]) -> int:
    """``min src[a] + d(a, b) + dst[b]`` by a two-sided upward search.

    Each side stops once it pops a distance above the best meeting value; the
    search ends when both sides have stopped or run dry.
    """
    dist = (dict(src), dict(dst))
    settled: tuple[dict[int, int], dict[int, int]] = ({}, {})
    pq = ([(d, v) for v, d in src.items()], [(d, v) for v, d in dst.items()])
    pq[0].sort()
    pq[1].sort()
    stopped = [False, False]
    best = INF
    while pq[0] or pq[1]:
        if stopped[0] and stopped[1]:
            break
        if (stopped[0] and not pq[1]) or (stopped[1] and not pq[0]):
            break
        for side in (0, 1):
            q = pq[side]
            if stopped[side] or not q:
                continue
            d, v = heappop(q)
            mine = settled[side]
            if v in mine:
                continue
            mine[v] = d
            if d > best:
                stopped[side] = True
                continue
            o = settled[1 - side].get(v)
            if o is not None and d + o < best:
                best = d + o
            dm = dist[side]
            for labels in ups:
                lv = labels.get(v)
                if not lv:
                    continue
                for u, w in lv.items():
                    nd = d + w
                    if nd < dm.get(u, INF) and u not in mine:
                        dm[u] = nd
                        heappush(q, (nd, u))
    return best if best < INF else INF
