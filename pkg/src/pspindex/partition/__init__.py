"""Partitioners, boundary classification, overlays and metrics."""

from .coretree import core_tree_decompose
from .growing import partition_growing, partition_hierarchical
from .metrics import PartitionMetrics, partition_components, partition_metrics
from .overlay import (BoundaryClass, OverlayGraph, boundary_pairs, build_overlay,
                      classify_boundaries, prune_overlay, pruned_pair_set, region_pairs)
from .result import (CORE_PERIPHERY, HIERARCHICAL, OVERLAY, PLANAR, HierarchyNode,
                     PartitionResult, Region, derive_boundaries, from_assignment,
                     ingest_partition_file, write_partition)
from .vertexcut import convert_vertex_cut

__all__ = [
    "BoundaryClass", "CORE_PERIPHERY", "HIERARCHICAL", "HierarchyNode", "OVERLAY",
    "OverlayGraph", "PLANAR", "PartitionMetrics", "PartitionResult", "Region",
    "boundary_pairs", "build_overlay", "classify_boundaries", "convert_vertex_cut",
    "core_tree_decompose", "derive_boundaries", "from_assignment", "ingest_partition_file",
    "partition_components", "partition_growing", "partition_hierarchical",
    "partition_metrics", "prune_overlay", "pruned_pair_set", "region_pairs", "write_partition",
]
