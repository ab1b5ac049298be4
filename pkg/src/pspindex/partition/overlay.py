"""Boundary classification, overlay graphs and overlay pruning."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from ..errors import IncompleteOverlayError, InvalidPartitionError
from ..graph import INF, Graph, edge_key
from .result import OVERLAY, PartitionResult

Pair = tuple[int, int]


@dataclass
class BoundaryClass:
    """Per-region split of the boundary into half- and full-connected vertices.

    A boundary vertex is half-connected when it has a neighbor inside the
    region that is not itself a boundary vertex of the region.
    """

    half: list[list[int]]
    full: list[list[int]]


def classify_boundaries(g: Graph, p: PartitionResult) -> BoundaryClass:
    half, full = [], []
    for r, reg in enumerate(p.regions()):
        bset = set(reg.boundary)
        h, f = [], []
        for b in reg.boundary:
            inner = any(u in reg.vertices and u not in bset and p.edge_owner(b, u) == r
                        for u in g.adj[b])
            (h if inner else f).append(b)
        half.append(h)
        full.append(f)
    return BoundaryClass(half, full)


def boundary_pairs(boundary: Iterable[int]) -> list[Pair]:
    return [edge_key(a, b) for a, b in combinations(sorted(boundary), 2)]


def pruned_pair_set(g: Graph, p: PartitionResult, c: BoundaryClass, r: int) -> list[Pair]:
    """Pairs of region ``r`` kept after pruning: half x half plus the region's
    own edges between a full-connected vertex and another boundary vertex."""
    reg = p.regions()[r]
    bset = set(reg.boundary)
    pairs = set(boundary_pairs(c.half[r]))
    for f in c.full[r]:
        for x in g.adj[f]:
            if x in bset and p.edge_owner(f, x) == r:
                pairs.add(edge_key(f, x))
    return sorted(pairs)


def region_pairs(g: Graph, p: PartitionResult, prune: bool,
                 c: BoundaryClass | None = None) -> list[list[Pair]]:
    """Overlay shortcut pairs required for every region."""
    if not prune:
        return [boundary_pairs(reg.boundary) for reg in p.regions()]
    c = c or classify_boundaries(g, p)
    return [pruned_pair_set(g, p, c, r) for r in range(len(p.regions()))]


@dataclass
class OverlayGraph:
    """Overlay vertex set, base edges and per-region shortcut weights.

    The effective weight of a pair is the minimum over its base edge and every
    region shortcut between the same endpoints.
    """

    vertices: list[int]
    base: dict[Pair, int]
    shortcuts: list[dict[Pair, int]]
    pruned: bool = False
    _owners: dict[Pair, list[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._owners = {}
        for r, sc in enumerate(self.shortcuts):
            for pair in sc:
                self._owners.setdefault(pair, []).append(r)

    def weight(self, u: int, v: int) -> int:
        pair = edge_key(u, v)
        w = self.base.get(pair, INF)
        for r in self._owners.get(pair, ()):
            x = self.shortcuts[r][pair]
            if x < w:
                w = x
        return w

    def set_shortcut(self, r: int, pair: Pair, w: int) -> None:
        sc = self.shortcuts[r]
        if pair not in sc:
            self._owners.setdefault(pair, []).append(r)
        sc[pair] = w

    def pairs(self) -> set[Pair]:
        return set(self.base) | set(self._owners)

    def adjacency(self) -> dict[int, dict[int, int]]:
        adj: dict[int, dict[int, int]] = {v: {} for v in self.vertices}
        for a, b in self.pairs():
            w = self.weight(a, b)
            if w < INF:
                adj[a][b] = w
                adj[b][a] = w
        return adj

    def edge_count(self) -> int:
        return sum(1 for a, b in self.pairs() if self.weight(a, b) < INF)

    def shortcut_count(self) -> int:
        return len(self._owners)


def build_overlay(p: PartitionResult, shortcut_weights: Mapping[int, Mapping[Pair, int]],
                  g: Graph, required: list[list[Pair]] | None = None,
                  pruned: bool = False) -> OverlayGraph:
    """Union the per-region boundary shortcuts with the base edges.

    ``required`` defaults to every boundary pair of every region; a missing
    weight raises :class:`IncompleteOverlayError` (``INF`` is a valid weight).
    """
    regions = p.regions()
    if required is None:
        required = [boundary_pairs(reg.boundary) for reg in regions]
    shortcuts: list[dict[Pair, int]] = []
    for r in range(len(regions)):
        given = shortcut_weights.get(r, {})
        sc = {}
        for pair in required[r]:
            key = edge_key(*pair)
            if key in given:
                sc[key] = given[key]
            elif (key[1], key[0]) in given:
                sc[key] = given[(key[1], key[0])]
            else:
                raise IncompleteOverlayError(f"region {r}: no weight for boundary pair {key}")
        shortcuts.append(sc)
    base = {edge_key(u, v): w for u, v, w in g.edges() if p.edge_owner(u, v) == OVERLAY}
    return OverlayGraph(sorted(p.overlay_vertices()), base, shortcuts, pruned)


def prune_overlay(o: OverlayGraph, c: BoundaryClass, g: Graph, p: PartitionResult) -> OverlayGraph:
    """Drop shortcuts made redundant by full-connected boundary vertices.

    Kept pairs retain their unpruned weight; base edges are untouched.
    """
    regions = p.regions()
    if len(c.half) != len(regions) or len(o.shortcuts) != len(regions):
        raise InvalidPartitionError("classification does not match the overlay's regions")
    for r, reg in enumerate(regions):
        if sorted(c.half[r] + c.full[r]) != sorted(reg.boundary):
            raise InvalidPartitionError(f"classification of region {r} does not cover its boundary")
    shortcuts = []
    for r in range(len(regions)):
        keep = pruned_pair_set(g, p, c, r)
        sc = o.shortcuts[r]
        shortcuts.append({pair: sc[pair] for pair in keep if pair in sc})
    return OverlayGraph(list(o.vertices), dict(o.base), shortcuts, True)
