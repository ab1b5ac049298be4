"""Undirected integer-weighted graphs, weight updates and small fixtures.

Weights are plain Python ints in ``[0, INF)``; ``INF`` marks an absent edge
and every distance sum is clamped with :func:`sat_add`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .errors import EdgeNotFoundError, UpdateContractError, VertexRangeError

INF = 2**62


def sat_add(a: int, b: int) -> int:
    s = a + b
    return s if s < INF else INF


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Adjacency-dict graph with stable integer vertex ids ``0..n-1``.

    Deleting a vertex removes its edges but keeps the id, so ids never shift.
    """

    __slots__ = ("n", "adj", "coords")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self.adj: list[dict[int, int]] = [dict() for _ in range(n)]
        self.coords: list[tuple[int, int]] | None = None
        for u, v, w in edges:
            self.add_edge(u, v, w)

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise VertexRangeError(f"vertex {v} outside [0, {self.n})")

    def add_edge(self, u: int, v: int, w: int) -> None:
        """Insert an edge, keeping the minimum if it already exists."""
        self._check(u)
        self._check(v)
        if u == v:
            return
        w = int(w)
        if w < 0:
            raise ValueError("negative weight")
        if w >= INF:
            return
        cur = self.adj[u].get(v)
        if cur is None or w < cur:
            self.adj[u][v] = w
            self.adj[v][u] = w

    def set_weight(self, u: int, v: int, w: int) -> None:
        self._check(u)
        self._check(v)
        if w >= INF:
            self.adj[u].pop(v, None)
            self.adj[v].pop(u, None)
        else:
            self.adj[u][v] = w
            self.adj[v][u] = w

    def weight(self, u: int, v: int) -> int:
        return self.adj[u].get(v, INF)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def neighbors(self, v: int) -> dict[int, int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for u, nbrs in enumerate(self.adj):
            for v, w in nbrs.items():
                if u < v:
                    yield u, v, w

    def copy(self) -> "Graph":
        g = Graph(self.n)
        g.adj = [dict(a) for a in self.adj]
        g.coords = None if self.coords is None else list(self.coords)
        return g

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------- updates

DECREASE = "decrease"
INCREASE = "increase"
INSERT = "insert"
DELETE = "delete"
VERTEX_INSERT = "vertex-insert"
VERTEX_DELETE = "vertex-delete"
UPDATE_KINDS = (DECREASE, INCREASE, INSERT, DELETE, VERTEX_INSERT, VERTEX_DELETE)


@dataclass(frozen=True)
class WeightUpdate:
    """One update. For vertex kinds ``v`` is unused and ``edges`` carries the
    ``(neighbor, weight)`` list to restore on vertex-insert."""

    kind: str
    u: int
    v: int = -1
    new_weight: int = INF
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        if self.kind not in UPDATE_KINDS:
            raise ValueError(f"unknown update kind {self.kind!r}")


class EdgeChange(NamedTuple):
    u: int
    v: int
    old: int
    new: int


def expand_update(g: Graph, upd: WeightUpdate) -> list[tuple[int, int, int]]:
    """Validate ``upd`` against ``g`` and return the per-edge ``(u, v, new)`` steps."""
    kind = upd.kind
    g._check(upd.u)
    if kind == VERTEX_DELETE:
        return [(upd.u, x, INF) for x in sorted(g.adj[upd.u])]
    if kind == VERTEX_INSERT:
        out = []
        for x, w in upd.edges:
            g._check(x)
            if x == upd.u:
                continue
            if g.has_edge(upd.u, x):
                raise UpdateContractError(f"vertex-insert: edge ({upd.u},{x}) already present")
            out.append((upd.u, x, int(w)))
        return out
    g._check(upd.v)
    if upd.u == upd.v:
        raise UpdateContractError("self-loop update")
    cur = g.weight(upd.u, upd.v)
    if kind == INSERT:
        if cur < INF:
            raise UpdateContractError(f"insert: edge ({upd.u},{upd.v}) already present")
        if upd.new_weight >= INF:
            raise UpdateContractError("insert needs a finite weight")
        return [(upd.u, upd.v, int(upd.new_weight))]
    if cur >= INF:
        raise EdgeNotFoundError(f"edge ({upd.u},{upd.v}) not present")
    if kind == DELETE:
        return [(upd.u, upd.v, INF)]
    if kind == DECREASE and not upd.new_weight < cur:
        raise UpdateContractError(f"decrease {cur}->{upd.new_weight} does not decrease")
    if kind == INCREASE and not upd.new_weight > cur:
        raise UpdateContractError(f"increase {cur}->{upd.new_weight} does not increase")
    if upd.new_weight < 0:
        raise UpdateContractError("negative weight")
    return [(upd.u, upd.v, min(int(upd.new_weight), INF))]


def apply_update(g: Graph, upd: WeightUpdate) -> list[EdgeChange]:
    """Mutate ``g`` and report every edge whose weight changed."""
    report = []
    for u, v, w in expand_update(g, upd):
        old = g.weight(u, v)
        g.set_weight(u, v, w)
        report.append(EdgeChange(u, v, old, w if w < INF else INF))
    return report


def vertex_edges(g: Graph, v: int) -> tuple[tuple[int, int], ...]:
    """Snapshot of ``v``'s incident edges, usable to build a vertex-insert."""
    return tuple(sorted(g.adj[v].items()))


# ---------------------------------------------------------------- workloads

def scale_weight(w: int, alpha: float) -> int:
    return max(1, round(alpha * w))


def generate_updates(g: Graph, count: int, seed: int) -> list[WeightUpdate]:
    """Random decrease/increase updates with ``new = max(1, round(alpha * w))``.

    Updates are consistent when applied in order: each one is drawn against the
    weights left behind by its predecessors.
    """
    if count <= 0:
        return []
    edges = sorted((u, v) for u, v, _ in g.edges())
    if not edges:
        raise ValueError("graph has no edges to update")
    rng = random.Random(seed)
    cur: dict[tuple[int, int], int] = {}
    out = []
    for _ in range(count):
        u, v = edges[rng.randrange(len(edges))]
        w = cur.get((u, v), g.adj[u][v])
        while True:
            alpha = 2.0 - rng.random() * 2.0  # (0, 2]
            if alpha == 1.0:
                continue
            nw = scale_weight(w, alpha)
            if nw != w:
                break
        cur[(u, v)] = nw
        out.append(WeightUpdate(DECREASE if nw < w else INCREASE, u, v, nw))
    return out


def assign_complex_weights(g: Graph, seed: int = 0, scale: int | None = None) -> Graph:
    """Inverse-degree weights ``ceil(C / max(deg u, deg v))`` with C = max degree.

    The formula has no ties to break, so ``seed`` is accepted only for
    interface symmetry with the other generators.
    """
    del seed
    out = Graph(g.n)
    out.coords = g.coords
    c = scale if scale is not None else max((g.degree(v) for v in range(g.n)), default=1)
    for u, v, _ in g.edges():
        d = max(g.degree(u), g.degree(v))
        out.add_edge(u, v, max(1, math.ceil(c / d)))
    return out


# ---------------------------------------------------------------- fixtures

def path_graph(n: int, weight: int = 1) -> Graph:
    return Graph(n, ((i, i + 1, weight) for i in range(n - 1)))


def grid_graph(rows: int, cols: int, weight: int = 1, seed: int | None = None,
               wmax: int = 100) -> Graph:
    """``rows x cols`` grid, vertex ``r*cols + c``. Random weights if ``seed`` given."""
    rng = random.Random(seed) if seed is not None else None
    g = Graph(rows * cols)
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            for u in ((v + 1) if c + 1 < cols else None, (v + cols) if r + 1 < rows else None):
                if u is not None:
                    g.add_edge(v, u, rng.randint(1, wmax) if rng else weight)
    g.coords = [(c, r) for r in range(rows) for c in range(cols)]
    return g


def random_connected_graph(n: int, seed: int, extra: float = 1.0,
                           wmin: int = 1, wmax: int = 100) -> Graph:
    """Random spanning tree plus about ``extra * n`` additional edges."""
    rng = random.Random(seed)
    g = Graph(n)
    perm = list(range(n))
    rng.shuffle(perm)
    for i in range(1, n):
        g.add_edge(perm[i], perm[rng.randrange(i)], rng.randint(wmin, wmax))
    target = g.m + int(extra * n)
    tries = 0
    while g.m < target and tries < 20 * n + 100:
        tries += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v and not g.has_edge(u, v):
            g.add_edge(u, v, rng.randint(wmin, wmax))
    return g


def star_graph(leaves: int, weight: int = 1) -> Graph:
    return Graph(leaves + 1, ((0, i, weight) for i in range(1, leaves + 1)))
