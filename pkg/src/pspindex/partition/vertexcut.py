"""Vertex-cut to edge-cut conversion by vertex duplication."""

from __future__ import annotations

from typing import Mapping, Sequence

from ..errors import InvalidPartitionError
from ..graph import Graph
from .result import PLANAR, PartitionResult, from_assignment, normalize_ids


def convert_vertex_cut(g: Graph, home: Sequence[int], cut_vertices: set[int] | frozenset[int],
                       assignment: Mapping[int, Mapping[int, Sequence[int]]]
                       ) -> tuple[Graph, PartitionResult]:
    """Duplicate every cut vertex once per extra partition it belongs to.

    ``home[v]`` is the partition of each original vertex. For a cut vertex
    ``v``, ``assignment[v]`` maps partition id to the neighbors of ``v`` whose
    edges live in that partition. The copy of ``v`` for partition ``q``
    (``v`` itself when ``q == home[v]``) takes over those edges and is tied to
    ``v`` by a zero-weight edge. Copies get ids ``n, n+1, ...`` in order of
    (vertex, partition).
    """
    if len(home) != g.n:
        raise InvalidPartitionError("home assignment must cover every vertex")
    copy_of: dict[tuple[int, int], int] = {}
    part_of = list(home)
    nxt = g.n
    group_of: dict[int, dict[int, int]] = {}
    for v in sorted(cut_vertices):
        groups = assignment.get(v)
        if groups is None:
            raise InvalidPartitionError(f"cut vertex {v} has no assignment")
        where: dict[int, int] = {}
        for q, nbrs in groups.items():
            for x in nbrs:
                if x not in g.adj[v]:
                    raise InvalidPartitionError(f"{x} is not a neighbor of cut vertex {v}")
                where[x] = q
        missing = [x for x in g.adj[v] if x not in where]
        if missing:
            raise InvalidPartitionError(f"neighbors {missing} of cut vertex {v} are not covered by any copy")
        group_of[v] = where
        for q in sorted(groups):
            if q == home[v]:
                copy_of[(v, q)] = v
            else:
                copy_of[(v, q)] = nxt
                part_of.append(q)
                nxt += 1
    out = Graph(nxt)

    def end(v: int, other: int) -> int:
        where = group_of.get(v)
        if where is None:
            return v
        return copy_of[(v, where[other])]

    for u, v, w in g.edges():
        out.add_edge(end(u, v), end(v, u), w)
    for (v, _q), c in copy_of.items():
        if c != v:
            out.add_edge(v, c, 0)
    part_of, _ = normalize_ids(part_of)
    return out, from_assignment(out, part_of, PLANAR, {"method": "vertex-cut"})
