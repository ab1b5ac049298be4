"""Plain and bidirectional Dijkstra over adjacency mappings.

``adj`` is anything indexable by vertex id returning a ``{neighbor: weight}``
mapping: a :class:`~pspindex.graph.Graph`'s ``adj`` list or a dict of dicts.
"""

from __future__ import annotations

from heapq import heappop, heappush
from typing import Collection, Mapping, Sequence, Union

from ..graph import INF, Graph

Adjacency = Union[Sequence[Mapping[int, int]], Mapping[int, Mapping[int, int]]]


def _adj(g: Graph | Adjacency) -> Adjacency:
    return g.adj if isinstance(g, Graph) else g


def dijkstra(g: Graph | Adjacency, s: int, t: int) -> int:
    """Exact shortest distance from ``s`` to ``t`` (``INF`` if disconnected)."""
    if s == t:
        return 0
    adj = _adj(g)
    dist = {s: 0}
    heap = [(0, s)]
    done = set()
    while heap:
        d, v = heappop(heap)
        if v in done:
            continue
        if v == t:
            return d
        done.add(v)
        for u, w in adj[v].items():
            nd = d + w
            if nd < dist.get(u, INF):
                dist[u] = nd
                heappush(heap, (nd, u))
    return INF


def dijkstra_all(g: Graph | Adjacency, s: int,
                 targets: Collection[int] | None = None) -> dict[int, int]:
    """Distances from ``s`` to every reachable vertex.

    With ``targets`` the search stops once all of them are settled; the result
    then holds at least those targets that are reachable.
    """
    adj = _adj(g)
    dist = {s: 0}
    heap = [(0, s)]
    done: dict[int, int] = {}
    left = None if targets is None else set(targets)
    while heap:
        d, v = heappop(heap)
        if v in done:
            continue
        done[v] = d
        if left is not None:
            left.discard(v)
            if not left:
                break
        for u, w in adj[v].items():
            nd = d + w
            if nd < dist.get(u, INF):
                dist[u] = nd
                heappush(heap, (nd, u))
    return done


def bidirectional_search(g: Graph | Adjacency, s: int, t: int) -> int:
    """Bidirectional Dijkstra on an undirected graph."""
    if s == t:
        return 0
    adj = _adj(g)
    dist = ({s: 0}, {t: 0})
    done: tuple[dict[int, int], dict[int, int]] = ({}, {})
    heaps = ([(0, s)], [(0, t)])
    best = INF
    while heaps[0] and heaps[1]:
        if heaps[0][0][0] + heaps[1][0][0] >= best:
            break
        side = 0 if heaps[0][0][0] <= heaps[1][0][0] else 1
        d, v = heappop(heaps[side])
        if v in done[side]:
            continue
        done[side][v] = d
        mine, other = dist[side], dist[1 - side]
        for u, w in adj[v].items():
            nd = d + w
            if nd < mine.get(u, INF):
                mine[u] = nd
                heappush(heaps[side], (nd, u))
            ou = other.get(u)
            if ou is not None and nd + ou < best:
                best = nd + ou
        ov = other.get(v)
        if ov is not None and d + ov < best:
            best = d + ov
    return best if best < INF else INF


def all_pairs(g: Graph | Adjacency, vertices: Sequence[int]) -> dict[int, dict[int, int]]:
    """Oracle table restricted to ``vertices`` (one full search per source)."""
    adj = _adj(g)
    out = {}
    for s in vertices:
        d = dijkstra_all(adj, s)
        out[s] = {t: d.get(t, INF) for t in vertices}
    return out
