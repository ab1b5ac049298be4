"""Named index presets over the (strategy, partition, engines) axes."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

from .errors import ConfigError
from .graph import Graph, WeightUpdate
from .partition import (CORE_PERIPHERY, HIERARCHICAL, PLANAR, HierarchyNode, PartitionResult,
                        core_tree_decompose, partition_growing, partition_hierarchical)
from .strategy import NO, POST, PRE, STRATEGIES, EngineSpec, PSPIndex, Signal

STRUCTURES = (PLANAR, CORE_PERIPHERY, HIERARCHICAL)


@dataclass(frozen=True)
class IndexDescriptor:
    name: str = "custom"
    strategy: str = NO
    structure: str = PLANAR
    overlay_engine: str = "ch"
    partition_engine: str = "ch"
    prune: bool = False
    k: int = 32
    bandwidth: int = 40
    fanout: int = 4
    leaf_size: int = 128
    partition_order: str = "boundary-first"
    union_query: bool = False
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.structure not in STRUCTURES:
            raise ConfigError(f"unknown partition structure {self.structure!r}")

    def with_params(self, **kw) -> "IndexDescriptor":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("params")
        return d


PRESETS: dict[str, IndexDescriptor] = {
    "N-CH-P": IndexDescriptor("N-CH-P", NO, PLANAR, "ch", "ch", union_query=True),
    "P-TD-P": IndexDescriptor("P-TD-P", POST, PLANAR, "td", "td"),
    "P-PT-CP": IndexDescriptor("P-PT-CP", POST, CORE_PERIPHERY, "pll", "td"),
    "N-PC-CP": IndexDescriptor("N-PC-CP", NO, CORE_PERIPHERY, "pll", "ch", partition_order="mde"),
    "N-TS-HP": IndexDescriptor("N-TS-HP", NO, HIERARCHICAL, "td", "cached"),
}


def get_preset(name: str) -> IndexDescriptor:
    key = name.upper()
    if key not in PRESETS:
        raise ConfigError(f"unknown index {name!r}; expected one of {sorted(PRESETS)} or custom")
    return PRESETS[key]


def make_partition(g: Graph, desc: IndexDescriptor, seed: int = 0) -> PartitionResult:
    if desc.structure == PLANAR:
        return partition_growing(g, min(desc.k, g.n), seed)
    if desc.structure == CORE_PERIPHERY:
        return core_tree_decompose(g, desc.bandwidth)
    return partition_hierarchical(g, desc.fanout, desc.leaf_size, seed)


def hierarchy_levels(g: Graph, root: HierarchyNode) -> dict[int, int]:
    """Shallowest non-root level at which each vertex is a node boundary."""
    level: dict[int, int] = {}
    for node in root.walk():
        if node.level == 0:
            continue
        inside = set(node.vertices)
        for v in node.vertices:
            if v in level and level[v] <= node.level:
                continue
            if any(u not in inside for u in g.adj[v]):
                level[v] = node.level
    return level


def _overlay_groups(g: Graph, p: PartitionResult) -> list[list[int]] | None:
    if p.structure != HIERARCHICAL or p.hierarchy is None:
        return None
    level = hierarchy_levels(g, p.hierarchy)
    ov = p.overlay_vertices()
    tiers: dict[int, list[int]] = {}
    for v in sorted(ov):
        tiers.setdefault(level.get(v, 1), []).append(v)
    return [tiers[lv] for lv in sorted(tiers, reverse=True)]


def engine_spec(desc: IndexDescriptor) -> EngineSpec:
    shortcuts = desc.union_query and desc.strategy == NO and not desc.prune \
        and desc.partition_engine == "ch" and desc.overlay_engine == "ch"
    if desc.union_query and (desc.partition_engine != "ch" or desc.overlay_engine != "ch"):
        raise ConfigError("union queries need CH on both layers")
    if desc.union_query and desc.strategy != NO:
        raise ConfigError("union queries are defined for the no-boundary strategy only")
    order = "boundary-first" if desc.union_query else desc.partition_order
    return EngineSpec(desc.partition_engine, desc.overlay_engine, order,
                      "shortcuts" if shortcuts else "query", desc.union_query)


def build_index(g: Graph, desc: IndexDescriptor | str, seed: int = 0,
                partition: PartitionResult | None = None, threads: int = 1) -> PSPIndex:
    """Partition ``g`` (unless ``partition`` is given) and build the described index."""
    if isinstance(desc, str):
        desc = get_preset(desc)
    p = partition if partition is not None else make_partition(g, desc, seed)
    if p.structure != desc.structure:
        raise ConfigError(f"{desc.name} needs a {desc.structure} partition, got {p.structure}")
    idx = PSPIndex(g, p, desc.strategy, engine_spec(desc), desc.prune, threads=threads,
                   overlay_groups=_overlay_groups(g, p))
    idx.descriptor = desc
    idx.partition = p
    return idx


def index_query(idx: PSPIndex, s: int, t: int) -> int:
    return idx.query(s, t)


def index_update(idx: PSPIndex, upd: WeightUpdate) -> Signal | None:
    return idx.update(upd)


__all__ = [
    "IndexDescriptor", "PRESETS", "STRUCTURES", "build_index", "engine_spec", "get_preset",
    "hierarchy_levels", "index_query", "index_update", "make_partition", "PRE", "POST", "NO",
]
