"""Oracle helpers and small fixtures shared by the test modules."""

from itertools import combinations

from pspindex.engines import dijkstra_all
from pspindex.graph import INF, Graph
from pspindex.partition import from_assignment


def oracle_table(g, vertices=None):
    vs = range(g.n) if vertices is None else vertices
    return {s: dijkstra_all(g, s) for s in vs}


def sweep_mismatches(query, g, pairs=None, limit=10):
    """``(s, t, got, want)`` for pairs where ``query`` disagrees with Dijkstra."""
    if pairs is None:
        pairs = combinations(range(g.n), 2)
    by_src = {}
    for s, t in pairs:
        by_src.setdefault(s, []).append(t)
    bad = []
    for s in sorted(by_src):
        dist = dijkstra_all(g, s)
        for t in by_src[s]:
            got, want = query(s, t), dist.get(t, INF)
            if got != want:
                bad.append((s, t, got, want))
                if len(bad) >= limit:
                    return bad
    return bad


def p4(weight=1):
    return Graph(4, [(0, 1, weight), (1, 2, weight), (2, 3, weight)])


def example_graph():
    """Twelve-vertex, four-partition example (vertex ``v_i`` has id ``i - 1``).

    G1 = {v1, v2, v3, v10}, G2 = {v4, v7, v8, v9}, G3 = {v5, v12},
    G4 = {v6, v11}. The local distance v6-v11 (5) loses to the detour
    through v12 in G3 (2), and the v8-v9 overlay edge weighs 2.
    """
    def v(i):
        return i - 1

    edges = [
        (v(1), v(2), 1), (v(1), v(3), 2), (v(2), v(10), 2), (v(3), v(10), 3),
        (v(8), v(4), 1), (v(4), v(9), 1), (v(7), v(8), 2), (v(7), v(9), 3),
        (v(5), v(12), 2),
        (v(6), v(11), 5),
        (v(3), v(5), 1), (v(10), v(8), 3), (v(9), v(11), 4), (v(12), v(6), 1), (v(12), v(11), 1),
    ]
    g = Graph(12, edges)
    part = [0] * 12
    for i in (1, 2, 3, 10):
        part[v(i)] = 0
    for i in (4, 7, 8, 9):
        part[v(i)] = 1
    for i in (5, 12):
        part[v(i)] = 2
    for i in (6, 11):
        part[v(i)] = 3
    return g, from_assignment(g, part)


def pruning_example():
    """Partition 0 with five boundary vertices b1..b5 (ids 0..4) and inner v1, v2.

    b3 and b5 touch inner vertices; b1, b2, b4 only touch boundary vertices
    inside the partition. Each b has one neighbor in partition 1 (ids 7..11).
    """
    b1, b2, b3, b4, b5, v1, v2 = range(7)
    edges = [(b1, b2, 2), (b2, b3, 3), (b4, b5, 2), (b3, v1, 1), (v1, v2, 1), (v2, b5, 1)]
    outside = list(range(7, 12))
    for b, o in zip((b1, b2, b3, b4, b5), outside):
        edges.append((b, o, 4))
    for a, c in zip(outside, outside[1:]):
        edges.append((a, c, 1))
    g = Graph(12, edges)
    part = [0] * 7 + [1] * 5
    return g, from_assignment(g, part)


# one line per acceptance criterion, printed in the terminal summary
CRITERIA_LOG: list[str] = []
