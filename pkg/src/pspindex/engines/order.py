"""Vertex orderings: minimum degree elimination, degree, and boundary-first.

Rank 0 is contracted first; the highest rank is the most important vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from typing import Iterable, Mapping, Sequence

MDE = "minimum-degree-elimination"
DEGREE = "degree"
BOUNDARY_FIRST = "boundary-first"
SCHEMES = (MDE, DEGREE, BOUNDARY_FIRST)


@dataclass
class VertexOrder:
    rank: dict[int, int]
    scheme: str

    @property
    def sequence(self) -> list[int]:
        """Vertices by increasing rank."""
        seq = [0] * len(self.rank)
        for v, r in self.rank.items():
            seq[r] = v
        return seq

    def __len__(self) -> int:
        return len(self.rank)


def _vertex_list(adj) -> list[int]:
    return sorted(adj.keys()) if isinstance(adj, Mapping) else list(range(len(adj)))


def _mde_sequence(adj, groups: Sequence[Iterable[int]]) -> list[int]:
    """Eliminate group by group; inside a group always the current minimum degree.

    Vertices of later groups stay in the working graph (and gain fill edges)
    while earlier groups are being eliminated.
    """
    work: dict[int, set[int]] = {v: set(adj[v]) for v in _vertex_list(adj)}
    seq: list[int] = []
    for group in groups:
        members = set(group)
        heap = [(len(work[v]), v) for v in members]
        heapify(heap)
        while heap:
            d, v = heappop(heap)
            if v not in members or d != len(work[v]):
                continue
            members.discard(v)
            seq.append(v)
            nbrs = work.pop(v)
            nl = list(nbrs)
            for x in nl:
                wx = work[x]
                wx.discard(v)
                wx.update(nbrs)
                wx.discard(x)
                if x in members:
                    heappush(heap, (len(wx), x))
    return seq


def build_order(adj, scheme: str = MDE,
                groups: Sequence[Iterable[int]] | None = None,
                top: Iterable[int] | None = None) -> VertexOrder:
    """Compute a :class:`VertexOrder` over the vertices of ``adj``.

    ``top`` (boundary-first) puts the given vertices above all others.
    ``groups`` generalizes this to several tiers, least important first;
    vertices not listed in any group form the lowest tier.
    """
    verts = _vertex_list(adj)
    if scheme not in SCHEMES:
        raise ValueError(f"unknown ordering scheme {scheme!r}")
    if scheme == BOUNDARY_FIRST and groups is None:
        groups = [top or ()]
    if groups is not None:
        listed: set[int] = set()
        tiers = []
        for grp in groups:
            tier = [v for v in grp if v not in listed]
            listed.update(tier)
            tiers.append(tier)
        tiers.insert(0, [v for v in verts if v not in listed])
    else:
        tiers = [verts]
    if scheme == DEGREE:
        seq = []
        for tier in tiers:
            seq.extend(sorted(tier, key=lambda v: (len(adj[v]), v)))
    else:
        seq = _mde_sequence(adj, tiers)
    if groups is not None and scheme == MDE:
        scheme = BOUNDARY_FIRST
    return VertexOrder({v: i for i, v in enumerate(seq)}, scheme)
