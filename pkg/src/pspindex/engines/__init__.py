"""Shortest-path engines sharing one small protocol.

Every engine is constructed from an adjacency mapping ``{v: {u: w}}`` and
offers ``query(s, t)``, ``one_to_many(s, targets)``,
``multi_query(src_offsets, dst_offsets)``, ``update(changes)`` with
``(u, v, new_weight)`` triples, and ``stats()``. ``update`` returns the list of
changed shortcuts for hierarchy-based engines and ``[]`` otherwise.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Protocol, Sequence

from .ch import CHIndex, ShortcutChange, ch_query
from .dijkstra import all_pairs, bidirectional_search, dijkstra, dijkstra_all
from .order import BOUNDARY_FIRST, DEGREE, MDE, VertexOrder, build_order
from .pll import PLLIndex
from .table import APTable, BoundaryCachedSearch, DirectSearch
from .td import TDIndex

ENGINE_NAMES = ("ch", "td", "pll", "apt", "dijkstra", "cached")


class Engine(Protocol):
    def query(self, s: int, t: int) -> int: ...
    def one_to_many(self, s: int, targets: Sequence[int]) -> list[int]: ...
    def multi_query(self, src: Mapping[int, int], dst: Mapping[int, int]) -> int: ...
    def update(self, changes: Iterable[tuple[int, int, int]]) -> list: ...
    def stats(self) -> dict[str, int]: ...


def make_engine(name: str, adj, groups: Sequence[Iterable[int]] | None = None,
                sources: Iterable[int] = (), order: VertexOrder | None = None):
    """Build engine ``name`` over ``adj``.

    ``groups`` requests a tiered (boundary-first) order, least important tier
    first; ``sources`` are the cached vertices of the ``cached`` engine.
    """
    if name in ("ch", "td"):
        if order is None:
            order = build_order(adj, MDE, groups=groups) if groups else build_order(adj, MDE)
        return CHIndex(adj, order) if name == "ch" else TDIndex(adj, order)
    if name == "pll":
        if order is None:
            order = build_order(adj, DEGREE, groups=groups)
        return PLLIndex(adj, order)
    if name == "apt":
        return APTable(adj)
    if name == "dijkstra":
        return DirectSearch(adj)
    if name == "cached":
        return BoundaryCachedSearch(adj, sources=sources)
    raise ValueError(f"unknown engine {name!r}; expected one of {ENGINE_NAMES}")


__all__ = [
    "APTable", "BOUNDARY_FIRST", "BoundaryCachedSearch", "CHIndex", "DEGREE",
    "DirectSearch", "ENGINE_NAMES", "Engine", "MDE", "PLLIndex", "ShortcutChange",
    "TDIndex", "VertexOrder", "all_pairs", "bidirectional_search", "build_order",
    "ch_query", "dijkstra", "dijkstra_all", "make_engine",
]
