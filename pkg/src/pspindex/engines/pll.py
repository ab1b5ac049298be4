"""Pruned landmark labeling with incremental maintenance.

Hubs are processed in decreasing rank. Decreases are handled by resuming the
pruned searches of the hubs stored at the changed edge's endpoints. For an
increase, a hub is affected if the changed edge lay on one of its shortest
paths; all hubs ranked at or below the most important affected hub are then
rebuilt, which keeps the labels canonical. Once a decrease has left redundant
entries behind, increases fall back to a full rebuild.
"""

from __future__ import annotations

from heapq import heappop, heappush
from typing import Iterable, Mapping, Sequence

from ..errors import NotIndexedError
from ..graph import INF
from .ch import adjacency_dict
from .order import DEGREE, VertexOrder, build_order


class PLLIndex:
    def __init__(self, adj, order: VertexOrder | None = None, rebuild_fallback: bool = False):
        self.adj = adjacency_dict(adj)
        self.order = order or _high_degree_order(self.adj)
        self.rank = self.order.rank
        self.rebuild_fallback = rebuild_fallback
        self.full_rebuilds = 0
        self._hubs = sorted(self.adj, key=self.rank.__getitem__, reverse=True)
        self._build_all()

    def _build_all(self) -> None:
        self.labels: dict[int, dict[int, int]] = {v: {} for v in self.adj}
        for h in self._hubs:
            self._pruned_search(h, [(0, h)])
        self.canonical = True

    def _pruned_search(self, h: int, starts: list[tuple[int, int]]) -> None:
        """Dijkstra from hub ``h`` seeded with ``starts``, pruned by existing labels."""
        labels, adj = self.labels, self.adj
        lh_items = dict(labels[h])
        dist = {}
        heap = list(starts)
        for d, v in starts:
            dist[v] = min(dist.get(v, INF), d)
        heap.sort()
        done = set()
        while heap:
            d, v = heappop(heap)
            if v in done or d > dist.get(v, INF):
                continue
            done.add(v)
            lv = labels[v]
            if v != h:
                best = INF
                for x, dx in lv.items():
                    o = lh_items.get(x)
                    if o is not None:
                        c = dx + o
                        if c < best:
                            best = c
                if best <= d:
                    continue
            cur = lv.get(h)
            if cur is not None and cur <= d:
                continue
            lv[h] = d
            if v == h:
                lh_items[h] = d
            for u, w in adj[v].items():
                nd = d + w
                if nd < dist.get(u, INF):
                    dist[u] = nd
                    heappush(heap, (nd, u))

    # ------------------------------------------------------------ queries

    def __contains__(self, v: int) -> bool:
        return v in self.labels

    @property
    def vertices(self):
        return self.labels.keys()

    def query(self, s: int, t: int) -> int:
        try:
            ls, lt = self.labels[s], self.labels[t]
        except KeyError as e:
            raise NotIndexedError(e.args[0]) from None
        if s == t:
            return 0
        if len(ls) > len(lt):
            ls, lt = lt, ls
        best = INF
        for h, d in ls.items():
            o = lt.get(h)
            if o is not None and d + o < best:
                best = d + o
        return best

    def one_to_many(self, s: int, targets: Sequence[int]) -> list[int]:
        return [self.query(s, t) for t in targets]

    def multi_query(self, src: Mapping[int, int], dst: Mapping[int, int]) -> int:
        near: dict[int, int] = {}
        for b, off in src.items():
            for h, d in self.labels[b].items():
                if off + d < near.get(h, INF):
                    near[h] = off + d
        best = INF
        for b, off in dst.items():
            for h, d in self.labels[b].items():
                x = near.get(h)
                if x is not None and x + off + d < best:
                    best = x + off + d
        return best if best < INF else INF

    def stats(self) -> dict[str, int]:
        return {"vertices": len(self.labels),
                "label_entries": sum(len(x) for x in self.labels.values())}

    # ------------------------------------------------------------ maintenance

    def update(self, changes: Iterable[tuple[int, int, int]]) -> list:
        changes = list(changes)
        decreases, increases = [], []
        for u, v, w in changes:
            if u not in self.adj or v not in self.adj:
                raise NotIndexedError(f"({u},{v})")
            old = self.adj[u].get(v, INF)
            if w >= INF:
                self.adj[u].pop(v, None)
                self.adj[v].pop(u, None)
            else:
                self.adj[u][v] = w
                self.adj[v][u] = w
            if w < old:
                decreases.append((u, v, w))
            elif w > old:
                increases.append((u, v, old))
        if increases:
            self._handle_increases(increases)
        for u, v, w in decreases:
            self._handle_decrease(u, v, w)
        return []

    def _handle_decrease(self, a: int, b: int, w: int) -> None:
        rank = self.rank
        hubs = set(self.labels[a]) | set(self.labels[b])
        for h in sorted(hubs, key=rank.__getitem__, reverse=True):
            da = self.labels[a].get(h)
            db = self.labels[b].get(h)
            if da is not None:
                self._pruned_search(h, [(da + w, b)])
            if db is not None:
                self._pruned_search(h, [(db + w, a)])
        self.canonical = False

    def _handle_increases(self, increases: list[tuple[int, int, int]]) -> None:
        if self.rebuild_fallback or not self.canonical:
            self.full_rebuilds += 1
            self._build_all()
            return
        # A hub needs rebuilding iff the edge lay on one of its shortest paths
        # before the change; the labels still describe the old graph here.
        top = -1
        for h in self._hubs:
            for u, v, old in increases:
                du, dv = self.query(h, u), self.query(h, v)
                if du < INF and (du + old == dv or dv + old == du):
                    top = self.rank[h]
                    break
            if top >= 0:
                break
        if top < 0:
            return
        rank, labels = self.rank, self.labels
        for lab in labels.values():
            stale = [h for h in lab if rank[h] <= top]
            for h in stale:
                del lab[h]
        for h in self._hubs:
            if rank[h] <= top:
                self._pruned_search(h, [(0, h)])


def _high_degree_order(adj) -> VertexOrder:
    """Degree order, so the highest-degree vertex gets the highest rank."""
    return build_order(adj, DEGREE)
