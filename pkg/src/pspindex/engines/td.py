"""Tree-decomposition labels (H2H style) derived from the contraction hierarchy.

Node ``X(v) = {v} + up[v]``; the parent of ``v`` is its lowest-ranked upward
neighbor. Each vertex stores distances to all of its ancestors, and a query
takes the minimum over the lowest common ancestor's bag. Disconnected inputs
simply yield a forest; vertices in different trees are at distance ``INF``.
"""

from __future__ import annotations

from heapq import heappop, heappush
from typing import Iterable, Mapping, Sequence

from ..errors import NotIndexedError
from ..graph import INF
from .ch import CHIndex, ShortcutChange
from .order import VertexOrder


class TDIndex:
    def __init__(self, adj, order: VertexOrder | None = None):
        self.ch = CHIndex(adj, order)
        self.order = self.ch.order
        self._build_tree()

    @property
    def rank(self) -> dict[int, int]:
        return self.ch.rank

    @property
    def vertices(self):
        return self.ch.up.keys()

    def __contains__(self, v: int) -> bool:
        return v in self.ch.rank

    def _build_tree(self) -> None:
        up, rank = self.ch.up, self.ch.rank
        self.parent: dict[int, int | None] = {}
        self.children: dict[int, list[int]] = {v: [] for v in up}
        for v, nb in up.items():
            p = min(nb, key=rank.__getitem__) if nb else None
            self.parent[v] = p
            if p is not None:
                self.children[p].append(v)
        self.anc: dict[int, list[int]] = {}
        self.dis: dict[int, list[int]] = {}
        self.pos: dict[int, list[int]] = {}
        self.depth: dict[int, int] = {}
        self._structure = self.ch.structure_version
        for v in reversed(self.order.sequence):
            p = self.parent[v]
            self.anc[v] = (self.anc[p] + [v]) if p is not None else [v]
            self.depth[v] = len(self.anc[v]) - 1
        for v in reversed(self.order.sequence):
            depth = self.depth
            self.pos[v] = sorted([depth[u] for u in up[v]] + [depth[v]])
            self.dis[v] = self._row(v)
        self.height = max((d + 1 for d in self.depth.values()), default=0)
        self.width = max((len(x) + 1 for x in up.values()), default=0)

    def _row(self, v: int) -> list[int]:
        anc = self.anc[v]
        d = len(anc) - 1
        row = [INF] * (d + 1)
        row[d] = 0
        dis = self.dis
        depth = self.depth
        for u, w in self.ch.up[v].items():
            if w >= INF:
                continue
            j = depth[u]
            du = dis[u]
            for i in range(j + 1):
                c = w + du[i]
                if c < row[i]:
                    row[i] = c
            for i in range(j + 1, d):
                c = w + dis[anc[i]][j]
                if c < row[i]:
                    row[i] = c
        for i in range(d):
            if row[i] > INF:
                row[i] = INF
        return row

    # ------------------------------------------------------------ queries

    def lca_depth(self, s: int, t: int) -> int:
        """Depth of the lowest common ancestor, or -1 if in different trees."""
        a, b = self.anc[s], self.anc[t]
        if a[0] != b[0]:
            return -1
        lo, hi = 0, min(len(a), len(b)) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if a[mid] == b[mid]:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def query(self, s: int, t: int) -> int:
        if s == t:
            if s not in self.anc:
                raise NotIndexedError(s)
            return 0
        try:
            ds, dt = self.dis[s], self.dis[t]
        except KeyError as e:
            raise NotIndexedError(e.args[0]) from None
        k = self.lca_depth(s, t)
        if k < 0:
            return INF
        best = INF
        for i in self.pos[self.anc[s][k]]:
            c = ds[i] + dt[i]
            if c < best:
                best = c
        return best if best < INF else INF

    def one_to_many(self, s: int, targets: Sequence[int]) -> list[int]:
        return [self.query(s, t) for t in targets]

    def multi_query(self, src: Mapping[int, int], dst: Mapping[int, int]) -> int:
        """Every common ancestor is a valid meeting point, the LCA bag among them."""
        near: dict[int, int] = {}
        for b, off in src.items():
            row = self.dis[b]
            for a, d in zip(self.anc[b], row):
                c = off + d
                if c < near.get(a, INF):
                    near[a] = c
        best = INF
        for b, off in dst.items():
            row = self.dis[b]
            for a, d in zip(self.anc[b], row):
                x = near.get(a)
                if x is not None and x + off + d < best:
                    best = x + off + d
        return best if best < INF else INF

    def stats(self) -> dict[str, int]:
        st = self.ch.stats()
        st.update(height=self.height, width=self.width,
                  label_entries=sum(len(r) for r in self.dis.values()))
        return st

    # ------------------------------------------------------------ maintenance

    def update(self, changes: Iterable[tuple[int, int, int]]) -> list[ShortcutChange]:
        report = self.ch.update(changes)
        if self.ch.structure_version != self._structure:
            self._build_tree()
            return report
        if not report:
            return report
        rank = self.ch.rank
        heap = []
        flagged = set()
        for c in report:
            if c.u not in flagged:
                flagged.add(c.u)
                heappush(heap, (-rank[c.u], c.u))
        dirty: set[int] = set()
        while heap:
            _, v = heappop(heap)
            new = self._row(v)
            p = self.parent[v]
            if new != self.dis[v] or (p is not None and p in dirty):
                dirty.add(v)
            self.dis[v] = new
            if v in dirty:
                for c in self.children[v]:
                    if c not in flagged:
                        flagged.add(c)
                        heappush(heap, (-rank[c], c))
        return report
