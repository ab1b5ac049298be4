"""Search-based engines: dense all-pair table, direct search, boundary-cached search."""

from __future__ import annotations

from heapq import heapify, heappop, heappush
from typing import Iterable, Mapping, Sequence

from ..errors import NotIndexedError
from ..graph import INF
from .ch import adjacency_dict
from .dijkstra import bidirectional_search, dijkstra_all


def _apply(adj: dict[int, dict[int, int]], changes) -> list[tuple[int, int, int]]:
    applied = []
    for u, v, w in changes:
        if u not in adj or v not in adj:
            raise NotIndexedError(f"({u},{v})")
        if w >= INF:
            adj[u].pop(v, None)
            adj[v].pop(u, None)
        else:
            adj[u][v] = w
            adj[v][u] = w
        applied.append((u, v, w))
    return applied


class APTable:
    """Pairwise distances among ``subset`` computed over the whole input graph."""

    def __init__(self, adj, subset: Iterable[int] | None = None):
        self.adj = adjacency_dict(adj)
        self.subset = sorted(self.adj if subset is None else set(subset))
        self._fill()

    def _fill(self) -> None:
        keep = set(self.subset)
        self.table: dict[int, dict[int, int]] = {}
        for s in self.subset:
            d = dijkstra_all(self.adj, s, keep)
            self.table[s] = {t: d.get(t, INF) for t in self.subset}

    @property
    def vertices(self):
        return self.table.keys()

    def __contains__(self, v: int) -> bool:
        return v in self.table

    def query(self, s: int, t: int) -> int:
        try:
            return self.table[s][t]
        except KeyError:
            raise NotIndexedError(f"({s},{t}) outside the indexed subset") from None

    def one_to_many(self, s: int, targets: Sequence[int]) -> list[int]:
        return [self.query(s, t) for t in targets]

    def multi_query(self, src: Mapping[int, int], dst: Mapping[int, int]) -> int:
        best = INF
        for a, x in src.items():
            row = self.table[a]
            for b, y in dst.items():
                c = x + row[b] + y
                if c < best:
                    best = c
        return best if best < INF else INF

    def update(self, changes) -> list:
        if _apply(self.adj, changes):
            self._fill()
        return []

    def stats(self) -> dict[str, int]:
        return {"vertices": len(self.subset), "label_entries": len(self.subset) ** 2}


class DirectSearch:
    """No index at all: every query is a bidirectional Dijkstra."""

    def __init__(self, adj, **_):
        self.adj = adjacency_dict(adj)

    @property
    def vertices(self):
        return self.adj.keys()

    def __contains__(self, v: int) -> bool:
        return v in self.adj

    def query(self, s: int, t: int) -> int:
        if s not in self.adj or t not in self.adj:
            raise NotIndexedError(s if s not in self.adj else t)
        return bidirectional_search(self.adj, s, t)

    def one_to_many(self, s: int, targets: Sequence[int]) -> list[int]:
        if s not in self.adj:
            raise NotIndexedError(s)
        d = dijkstra_all(self.adj, s, [t for t in targets if t in self.adj])
        return [d.get(t, INF) for t in targets]

    def multi_query(self, src: Mapping[int, int], dst: Mapping[int, int]) -> int:
        """One Dijkstra seeded with the source offsets."""
        if not src or not dst:
            return INF
        dist = dict(src)
        heap = [(d, v) for v, d in src.items()]
        heapify(heap)
        done = set()
        best = INF
        while heap:
            d, v = heappop(heap)
            if d >= best:
                break
            if v in done:
                continue
            done.add(v)
            o = dst.get(v)
            if o is not None and d + o < best:
                best = d + o
            for u, w in self.adj[v].items():
                nd = d + w
                if nd < dist.get(u, INF):
                    dist[u] = nd
                    heappush(heap, (nd, u))
        return best if best < INF else INF

    def update(self, changes) -> list:
        _apply(self.adj, changes)
        return []

    def stats(self) -> dict[str, int]:
        return {"vertices": len(self.adj), "label_entries": 0}


class BoundaryCachedSearch(DirectSearch):
    """Direct search plus cached single-source distances from ``sources``.

    Used for hierarchical leaves: boundary-to-leaf distances are kept, other
    queries fall back to search.
    """

    def __init__(self, adj, sources: Iterable[int] = (), **_):
        super().__init__(adj)
        self.sources = sorted(set(sources))
        self._fill()

    def _fill(self) -> None:
        self.cache = {b: dijkstra_all(self.adj, b) for b in self.sources}

    def query(self, s: int, t: int) -> int:
        c = self.cache.get(s)
        if c is not None:
            if t not in self.adj:
                raise NotIndexedError(t)
            return c.get(t, INF)
        c = self.cache.get(t)
        if c is not None:
            if s not in self.adj:
                raise NotIndexedError(s)
            return c.get(s, INF)
        return super().query(s, t)

    def one_to_many(self, s: int, targets: Sequence[int]) -> list[int]:
        if s in self.cache:
            c = self.cache[s]
            return [c.get(t, INF) for t in targets]
        if all(t in self.cache for t in targets):
            return [self.cache[t].get(s, INF) for t in targets]
        return super().one_to_many(s, targets)

    def update(self, changes) -> list:
        if _apply(self.adj, changes):
            self._fill()
        return []

    def stats(self) -> dict[str, int]:
        return {"vertices": len(self.adj),
                "label_entries": sum(len(c) for c in self.cache.values())}
