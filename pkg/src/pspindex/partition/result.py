"""Partition results and the region/overlay view the PSP machinery runs on.

Every structure is exposed through the same *layout*:

* a list of regions, each with a vertex set and a boundary, whose subgraph
  holds the edges owned by that region;
* the overlay vertex set, plus the base edges owned by the overlay itself.

Planar and hierarchical partitions map partition ``i`` to region ``i``; the
overlay vertices are all boundary vertices and the base edges are the
inter-edges. A core-periphery result maps each periphery tree to a region made
of the tree plus its interface (the region boundary), and the core graph forms
the overlay base.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..errors import InvalidPartitionError
from ..graph import Graph, edge_key

log = logging.getLogger(__name__)

PLANAR = "planar"
HIERARCHICAL = "hierarchical"
CORE_PERIPHERY = "core-periphery"
OVERLAY = -1


@dataclass(frozen=True)
class Region:
    id: int
    vertices: frozenset[int]
    boundary: tuple[int, ...]


@dataclass
class HierarchyNode:
    vertices: list[int]
    level: int
    children: list["HierarchyNode"] = field(default_factory=list)
    leaf_id: int = -1

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    @property
    def depth(self) -> int:
        return 0 if self.is_leaf else 1 + max(c.depth for c in self.children)

    def leaves(self) -> list["HierarchyNode"]:
        return [x for x in self.walk() if x.is_leaf]


@dataclass
class PartitionResult:
    part_of: list[int]
    k: int
    structure: str
    boundary: list[list[int]]
    inter_edges: list[tuple[int, int]]
    params: dict = field(default_factory=dict)
    hierarchy: HierarchyNode | None = None
    core: list[int] | None = None
    interfaces: dict[int, list[int]] | None = None

    @property
    def n(self) -> int:
        return len(self.part_of)

    @property
    def all_boundary(self) -> list[int]:
        out: set[int] = set()
        for b in self.boundary:
            out.update(b)
        return sorted(out)

    def members(self, i: int) -> list[int]:
        cache = self.__dict__.setdefault("_members", None)
        if cache is None:
            cache = [[] for _ in range(self.k)]
            for v, p in enumerate(self.part_of):
                cache[p].append(v)
            self.__dict__["_members"] = cache
        return cache[i]

    # ------------------------------------------------------------ layout

    def regions(self) -> list[Region]:
        cache = self.__dict__.get("_regions")
        if cache is not None:
            return cache
        if self.structure == CORE_PERIPHERY:
            assert self.interfaces is not None
            out = []
            for t in range(1, self.k):
                iface = tuple(sorted(self.interfaces.get(t, ())))
                out.append(Region(t, frozenset(self.members(t)) | frozenset(iface), iface))
        else:
            out = [Region(i, frozenset(self.members(i)), tuple(self.boundary[i]))
                   for i in range(self.k)]
        self.__dict__["_regions"] = out
        return out

    def overlay_vertices(self) -> set[int]:
        if self.structure == CORE_PERIPHERY:
            return set(self.core or ())
        return set(self.all_boundary)

    def edge_owner(self, u: int, v: int) -> int:
        """Region id owning edge ``(u, v)`` or :data:`OVERLAY` for base edges.

        The result is a *list index* into :meth:`regions` for convenience.
        """
        pu, pv = self.part_of[u], self.part_of[v]
        if self.structure == CORE_PERIPHERY:
            if pu == 0 and pv == 0:
                return OVERLAY
            return (pu if pu != 0 else pv) - 1
        return pu if pu == pv else OVERLAY

    def region_index_of(self, v: int) -> int:
        """Region holding ``v`` as a non-overlay vertex, else :data:`OVERLAY`."""
        p = self.part_of[v]
        if self.structure == CORE_PERIPHERY:
            return OVERLAY if p == 0 else p - 1
        if v in self._boundary_set():
            return OVERLAY
        return p

    def _boundary_set(self) -> set[int]:
        s = self.__dict__.get("_bset")
        if s is None:
            s = set(self.all_boundary)
            self.__dict__["_bset"] = s
        return s

    def home_regions(self, v: int) -> list[int]:
        """All region indexes whose vertex set contains ``v``."""
        if self.structure == CORE_PERIPHERY:
            p = self.part_of[v]
            if p != 0:
                return [p - 1]
            idx = self.__dict__.get("_iface_of")
            if idx is None:
                idx = {}
                for r, reg in enumerate(self.regions()):
                    for b in reg.boundary:
                        idx.setdefault(b, []).append(r)
                self.__dict__["_iface_of"] = idx
            return idx.get(v, [])
        return [self.part_of[v]]

    def summary(self) -> dict:
        return {"structure": self.structure, "k": self.k, **self.params}

    def __getstate__(self):
        return {k: v for k, v in self.__dict__.items() if not k.startswith("_")}

    def __setstate__(self, state):
        self.__dict__.update(state)


def derive_boundaries(g: Graph, part_of: Sequence[int], k: int
                      ) -> tuple[list[list[int]], list[tuple[int, int]]]:
    """Edge-cut boundary sets and inter-edges, recomputed from adjacency."""
    boundary: list[set[int]] = [set() for _ in range(k)]
    inter = []
    for u, v, _ in g.edges():
        if part_of[u] != part_of[v]:
            boundary[part_of[u]].add(u)
            boundary[part_of[v]].add(v)
            inter.append(edge_key(u, v))
    inter.sort()
    return [sorted(b) for b in boundary], inter


def from_assignment(g: Graph, part_of: Sequence[int], structure: str = PLANAR,
                    params: dict | None = None, **extra) -> PartitionResult:
    part_of = list(part_of)
    if len(part_of) != g.n:
        raise InvalidPartitionError(f"assignment covers {len(part_of)} vertices, graph has {g.n}")
    k = max(part_of, default=-1) + 1
    if any(p < 0 for p in part_of):
        raise InvalidPartitionError("negative partition id")
    boundary, inter = derive_boundaries(g, part_of, k)
    return PartitionResult(part_of, k, structure, boundary, inter, dict(params or {}), **extra)


def normalize_ids(ids: Sequence[int]) -> tuple[list[int], bool]:
    """Map arbitrary partition ids onto ``0..k-1`` preserving their order."""
    distinct = sorted(set(ids))
    if distinct == list(range(len(distinct))):
        return list(ids), False
    remap = {p: i for i, p in enumerate(distinct)}
    return [remap[p] for p in ids], True


def ingest_partition_file(g: Graph, lines: Iterable[str | int]) -> PartitionResult:
    """Partition from one id per line (line ``i`` = partition of vertex ``i``)."""
    ids = []
    for lineno, raw in enumerate(lines, 1):
        if isinstance(raw, int):
            ids.append(raw)
            continue
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        try:
            ids.append(int(s))
        except ValueError:
            raise InvalidPartitionError(f"line {lineno}: not an integer: {s!r}") from None
    if len(ids) != g.n:
        raise InvalidPartitionError(f"partition file has {len(ids)} entries, graph has {g.n} vertices")
    if any(p < 0 for p in ids):
        raise InvalidPartitionError("negative partition id")
    ids, changed = normalize_ids(ids)
    if changed:
        log.warning("partition ids were not contiguous; renumbered to 0..%d", max(ids))
    return from_assignment(g, ids, PLANAR, {"method": "file"})


def write_partition(p: PartitionResult, out) -> None:
    for x in p.part_of:
        out.write(f"{x}\n")
