"""Core-tree decomposition by bounded minimum degree elimination."""

from __future__ import annotations

from heapq import heapify, heappop, heappush

from ..errors import InvalidPartitionError
from ..graph import Graph
from .result import CORE_PERIPHERY, PartitionResult, derive_boundaries


def core_tree_decompose(g: Graph, bandwidth: int = 40) -> PartitionResult:
    """Contract minimum-degree vertices while their degree stays within ``bandwidth``.

    Contracted vertices form periphery trees (partitions ``1..k-1``); the rest
    is the core (partition ``0``). A tree's interface is the set of core
    vertices its root was adjacent to at contraction time. Isolated vertices
    are never contracted: contracting them would produce empty trees.
    """
    if bandwidth < 1:
        raise InvalidPartitionError("bandwidth must be >= 1")
    n = g.n
    work: list[set[int] | None] = [set(a) for a in g.adj]
    # ties go to the vertex of lower original degree, then lower id, so hubs stay in the core
    deg0 = [len(a) for a in g.adj]
    heap = [(len(work[v]), deg0[v], v) for v in range(n)]  # type: ignore[arg-type]
    heapify(heap)
    order: list[int] = []
    bag: dict[int, list[int]] = {}
    while heap:
        d, _, v = heappop(heap)
        nb = work[v]
        if nb is None or d != len(nb):
            continue
        if d > bandwidth:
            break
        if d == 0:
            continue
        order.append(v)
        bag[v] = sorted(nb)
        work[v] = None
        for x in nb:
            wx = work[x]
            wx.discard(v)
            wx.update(nb)
            wx.discard(x)
            heappush(heap, (len(wx), deg0[x], x))
    pos = {v: i for i, v in enumerate(order)}
    parent: dict[int, int | None] = {}
    for v in order:
        up = [x for x in bag[v] if x in pos]
        parent[v] = min(up, key=pos.__getitem__) if up else None
    root_of: dict[int, int] = {}
    for v in reversed(order):
        p = parent[v]
        root_of[v] = v if p is None else root_of[p]
    roots = sorted({r for r in root_of.values()})
    tree_id = {r: i + 1 for i, r in enumerate(roots)}
    part_of = [0] * n
    for v in order:
        part_of[v] = tree_id[root_of[v]]
    interfaces: dict[int, set[int]] = {t: set() for t in tree_id.values()}
    for v in order:
        t = part_of[v]
        interfaces[t].update(x for x in bag[v] if x not in pos)
    k = len(roots) + 1
    core = [v for v in range(n) if part_of[v] == 0]
    _, inter = derive_boundaries(g, part_of, k)
    iface = {t: sorted(s) for t, s in interfaces.items()}
    boundary = [sorted({b for s in iface.values() for b in s})] + [iface[t] for t in range(1, k)]
    width = max((len(b) for b in bag.values()), default=0)
    return PartitionResult(part_of, k, CORE_PERIPHERY, boundary, inter,
                           {"method": "core-tree", "bandwidth": bandwidth,
                            "core_size": len(core), "trees": k - 1, "max_width": width},
                           core=core, interfaces=iface)
