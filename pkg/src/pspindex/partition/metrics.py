"""Partition quality metrics."""

from __future__ import annotations

from dataclasses import dataclass

from ..graph import Graph
from .result import PartitionResult


@dataclass(frozen=True)
class PartitionMetrics:
    total_boundary: int
    avg_boundary: float
    connectivity_ratio: float
    components: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"total_boundary": self.total_boundary,
                "avg_boundary": round(self.avg_boundary, 6),
                "connectivity_ratio": round(self.connectivity_ratio, 6),
                "components": list(self.components)}


def partition_components(g: Graph, p: PartitionResult) -> list[int]:
    """Connected components of every partition, using intra-partition edges only."""
    part = p.part_of
    seen = [False] * g.n
    comps = [0] * p.k
    for s in range(g.n):
        if seen[s]:
            continue
        comps[part[s]] += 1
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for u in g.adj[v]:
                if not seen[u] and part[u] == part[v]:
                    seen[u] = True
                    stack.append(u)
    return comps


def partition_metrics(g: Graph, p: PartitionResult) -> PartitionMetrics:
    comps = partition_components(g, p)
    total = sum(len(b) for b in p.boundary)
    k = max(p.k, 1)
    return PartitionMetrics(total, total / k, sum(comps) / k, tuple(comps))
