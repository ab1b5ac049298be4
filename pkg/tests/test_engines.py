import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pspindex.engines import (APTable, BoundaryCachedSearch, CHIndex, DirectSearch, PLLIndex,
                              TDIndex, bidirectional_search, build_order, ch_query, dijkstra,
                              dijkstra_all, make_engine)
from pspindex.engines.order import BOUNDARY_FIRST, DEGREE, MDE
from pspindex.errors import NotIndexedError
from pspindex.graph import (INF, Graph, apply_update, generate_updates, grid_graph,
                            random_connected_graph, star_graph)

from helpers import oracle_table, p4, sweep_mismatches

ENGINES = ["ch", "td", "pll", "apt", "dijkstra", "cached"]


def engine(name, g):
    return make_engine(name, g.adj, sources=range(0, g.n, 3))


class TestDijkstra:
    def test_same_vertex(self):
        assert dijkstra(random_connected_graph(10, 1), 4, 4) == 0

    def test_p4(self):
        assert dijkstra(p4(), 0, 3) == 3

    def test_disconnected(self):
        assert dijkstra(Graph(3, [(0, 1, 2)]), 0, 2) == INF


class TestBidirectional:
    def test_random_pairs(self):
        g = random_connected_graph(500, 11)
        rng = random.Random(3)
        for _ in range(1000):
            s, t = rng.randrange(500), rng.randrange(500)
            assert bidirectional_search(g, s, t) == dijkstra(g, s, t)

    def test_same_vertex(self):
        assert bidirectional_search(p4(), 2, 2) == 0

    def test_c4_two_routes(self):
        c4 = Graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])
        assert bidirectional_search(c4, 0, 2) == 2
        assert ch_query([CHIndex(c4.adj).up], 0, 2) == 2


class TestOrder:
    def test_p4_mde_endpoint_first(self):
        o = build_order(p4().adj, MDE)
        assert o.sequence[0] == 0
        # after v0 goes, v1 and v3 both have degree 1 and the lower id wins
        assert o.sequence == [0, 1, 2, 3]

    def test_boundary_first_p4(self):
        o = build_order(p4().adj, BOUNDARY_FIRST, top=[1, 2])
        assert sorted(o.sequence[-2:]) == [1, 2]

    def test_degree_star(self):
        o = build_order(star_graph(5).adj, DEGREE)
        assert o.sequence[-1] == 0

    def test_bijection(self):
        g = random_connected_graph(60, 2)
        for scheme in (MDE, DEGREE):
            o = build_order(g.adj, scheme)
            assert sorted(o.rank.values()) == list(range(60))


class TestCH:
    def test_p4_shortcuts(self):
        g = p4()
        ch = CHIndex(g.adj)
        added = sum(len(u) for u in ch.up.values()) - g.m
        assert added <= 1

    def test_grid_sweep(self):
        g = grid_graph(10, 10, seed=4)
        ch = CHIndex(g.adj)
        assert not sweep_mismatches(ch.query, g)

    def test_single_vertex(self):
        ch = CHIndex(Graph(1).adj)
        assert ch.up == {0: {}}
        assert ch.query(0, 0) == 0

    def test_query_examples(self):
        ch = CHIndex(p4().adj)
        assert ch.query(1, 1) == 0
        assert ch.query(0, 3) == 3
        with pytest.raises(NotIndexedError):
            ch.query(0, 9)

    def test_random_sweep(self):
        g = random_connected_graph(200, 8)
        assert not sweep_mismatches(CHIndex(g.adj).query, g)

    @staticmethod
    def _dominated_edge(g, ch):
        """An edge beaten by a path whose interior ranks below both endpoints."""
        for u, v, w in g.edges():
            low = min(ch.rank[u], ch.rank[v])
            sub = {x: {y: c for y, c in g.adj[x].items()
                       if ch.rank[y] < low or y in (u, v)}
                   for x in range(g.n) if ch.rank[x] < low or x in (u, v)}
            sub[u].pop(v, None)
            sub[v].pop(u, None)
            if dijkstra(sub, u, v) < w:
                return u, v, w
        return None

    def test_increase_off_shortest_paths_reports_nothing(self):
        for seed in range(50):
            g = grid_graph(3, 3, seed=seed)
            ch = CHIndex(g.adj)
            found = self._dominated_edge(g, ch)
            if found:
                break
        assert found, "no 3x3 grid seed has a dominated edge"
        u, v, w = found
        assert w > oracle_table(g)[u][v]
        before = {(s, t): ch.query(s, t) for s, t in combinations(range(9), 2)}
        assert ch.update([(u, v, w + 10)]) == []
        assert {(s, t): ch.query(s, t) for s, t in combinations(range(9), 2)} == before

    def test_decrease_to_zero_matches_rebuild(self):
        g = p4()
        ch = CHIndex(g.adj)
        old = {v: dict(x) for v, x in ch.up.items()}
        report = ch.update([(1, 2, 0)])
        g.set_weight(1, 2, 0)
        fresh = CHIndex(g.adj, ch.order)
        assert ch.up == fresh.up
        changed = {(c.u, c.v) for c in report}
        assert changed == {(a, b) for a in old for b in old[a] if old[a][b] != fresh.up[a][b]}
        assert all(c.new < c.old for c in report)

    def test_random_updates(self):
        g = random_connected_graph(100, 5)
        ch = CHIndex(g.adj)
        for u in generate_updates(g, 100, 6):
            for c in apply_update(g, u):
                ch.update([(c.u, c.v, c.new)])
        assert not sweep_mismatches(ch.query, g)

    def test_insert_unknown_pair(self):
        g = random_connected_graph(40, 2)
        ch = CHIndex(g.adj)
        v0 = ch.structure_version
        u, v = next((a, b) for a, b in combinations(range(40), 2) if not g.has_edge(a, b))
        ch.update([(u, v, 1)])
        g.add_edge(u, v, 1)
        assert ch.structure_version > v0 or g.has_edge(u, v)
        assert not sweep_mismatches(ch.query, g)


class TestTD:
    def test_same_vertex(self):
        assert TDIndex(p4().adj).query(2, 2) == 0

    def test_grid_sweep(self):
        g = grid_graph(3, 3, seed=1)
        assert not sweep_mismatches(TDIndex(g.adj).query, g)

    def test_updates_with_queries(self):
        g = random_connected_graph(150, 9)
        td = TDIndex(g.adj)
        rng = random.Random(2)
        for u in generate_updates(g, 200, 7):
            td.update([(c.u, c.v, c.new) for c in apply_update(g, u)])
            pairs = [(rng.randrange(150), rng.randrange(150)) for _ in range(50)]
            assert not sweep_mismatches(td.query, g, pairs)

    def test_disconnected_components(self):
        g = Graph(5, [(0, 1, 2), (1, 2, 2), (3, 4, 1)])
        td = TDIndex(g.adj)
        assert td.query(0, 4) == INF
        assert td.query(0, 2) == 4 and td.query(3, 4) == 1

    def test_width_and_height(self):
        td = TDIndex(p4().adj)
        st_ = td.stats()
        assert st_["height"] >= 2 and st_["width"] <= 3


class TestPLL:
    def test_cover(self):
        g = random_connected_graph(100, 4)
        assert not sweep_mismatches(PLLIndex(g.adj).query, g)

    def test_top_hub(self):
        g = random_connected_graph(50, 4)
        pll = PLLIndex(g.adj)
        h = pll.order.sequence[-1]
        assert pll.labels[h][h] == 0
        assert all(h in pll.labels[v] for v in range(50))

    def test_updates(self):
        g = random_connected_graph(80, 12)
        pll = PLLIndex(g.adj)
        for u in generate_updates(g, 100, 1):
            pll.update([(c.u, c.v, c.new) for c in apply_update(g, u)])
        assert not sweep_mismatches(pll.query, g)

    def test_rebuild_fallback_same_answers(self):
        g = random_connected_graph(60, 3)
        a, b = PLLIndex(g.adj), PLLIndex(g.adj, rebuild_fallback=True)
        for u in generate_updates(g, 40, 2):
            ch = [(c.u, c.v, c.new) for c in apply_update(g, u)]
            a.update(ch)
            b.update(ch)
        for s, t in combinations(range(60), 2):
            assert a.query(s, t) == b.query(s, t)
        assert b.full_rebuilds > 0

    def test_soundness(self):
        g = random_connected_graph(60, 5)
        pll = PLLIndex(g.adj)
        for u in generate_updates(g, 60, 3):
            pll.update([(c.u, c.v, c.new) for c in apply_update(g, u)])
        for v, lab in pll.labels.items():
            dist = dijkstra_all(g, v)
            for h, d in lab.items():
                assert d >= dist[h]


class TestAPTable:
    def test_grid(self):
        g = grid_graph(3, 3, seed=2)
        t = APTable(g.adj)
        assert all(t.query(v, v) == 0 for v in range(9))
        assert all(t.query(a, b) == t.query(b, a) for a, b in combinations(range(9), 2))
        assert not sweep_mismatches(t.query, g)

    def test_outside_subset(self):
        t = APTable(p4().adj, subset=[0, 1])
        assert t.query(0, 1) == 1
        with pytest.raises(NotIndexedError):
            t.query(0, 3)


class TestSearchEngines:
    def test_direct(self):
        g = random_connected_graph(50, 1)
        assert not sweep_mismatches(DirectSearch(g.adj).query, g)

    def test_cached(self):
        g = random_connected_graph(50, 1)
        e = BoundaryCachedSearch(g.adj, sources=[0, 5, 9])
        assert not sweep_mismatches(e.query, g)
        assert e.one_to_many(5, [1, 2, 3]) == [dijkstra(g, 5, x) for x in (1, 2, 3)]


@pytest.mark.parametrize("name", ENGINES)
def test_multi_query_matches_brute_force(name):
    g = random_connected_graph(60, 21)
    e = engine(name, g)
    dist = oracle_table(g)
    rng = random.Random(name)
    for _ in range(30):
        src = {v: rng.randint(0, 50) for v in rng.sample(range(60), rng.randint(1, 4))}
        dst = {v: rng.randint(0, 50) for v in rng.sample(range(60), rng.randint(1, 4))}
        want = min(x + dist[a][b] + y for a, x in src.items() for b, y in dst.items())
        assert e.multi_query(src, dst) == want


@pytest.mark.parametrize("name", ENGINES)
def test_one_to_many(name):
    g = random_connected_graph(40, 8)
    e = engine(name, g)
    targets = [0, 7, 13, 39, 7]
    for s in (0, 3, 22):
        assert e.one_to_many(s, targets) == [dijkstra(g, s, t) for t in targets]


@st.composite
def connected(draw, lo=2, hi=40):
    n = draw(st.integers(lo, hi))
    seed = draw(st.integers(0, 10**6))
    extra = draw(st.sampled_from([0.0, 0.5, 1.5]))
    return random_connected_graph(n, seed, extra=extra)


@settings(max_examples=25, deadline=None)
@given(connected(), st.sampled_from(["ch", "td", "pll", "apt"]))
def test_oracle_equivalence(g, name):
    assert not sweep_mismatches(engine(name, g).query, g)


@settings(max_examples=25, deadline=None)
@given(connected(), st.sampled_from(ENGINES), st.integers(0, 10**6))
def test_update_soundness(g, name, seed):
    e = engine(name, g)
    for u in generate_updates(g, 30, seed):
        e.update([(c.u, c.v, c.new) for c in apply_update(g, u)])
    assert not sweep_mismatches(e.query, g)


@settings(max_examples=20, deadline=None)
@given(connected(), st.integers(0, 10**6))
def test_shortcut_admissibility(g, seed):
    ch = CHIndex(g.adj)
    td = TDIndex(g.adj)
    for u in generate_updates(g, 20, seed):
        ch_changes = [(c.u, c.v, c.new) for c in apply_update(g, u)]
        ch.update(ch_changes)
        td.update(ch_changes)
        dist = oracle_table(g)
        for idx in (ch, td.ch):
            for a, ups in idx.up.items():
                for b, w in ups.items():
                    assert w >= dist[a].get(b, INF)


@settings(max_examples=20, deadline=None)
@given(connected(hi=25), st.sampled_from(["ch", "td", "pll"]), st.integers(0, 10**6))
def test_monotonicity(g, name, seed):
    e = engine(name, g)
    pairs = list(combinations(range(g.n), 2))
    for u in generate_updates(g, 10, seed):
        before = [e.query(s, t) for s, t in pairs]
        e.update([(c.u, c.v, c.new) for c in apply_update(g, u)])
        after = [e.query(s, t) for s, t in pairs]
        if u.kind == "decrease":
            assert all(a <= b for a, b in zip(after, before))
        else:
            assert all(a >= b for a, b in zip(after, before))


def test_deleted_and_reinserted_edges():
    g = random_connected_graph(40, 6)
    engines = {n: engine(n, g) for n in ENGINES}
    rng = random.Random(1)
    for _ in range(15):
        u, v, w = rng.choice(list(g.edges()))
        g.set_weight(u, v, INF)
        for e in engines.values():
            e.update([(u, v, INF)])
        for n, e in engines.items():
            assert not sweep_mismatches(e.query, g), n
        g.set_weight(u, v, w)
        for e in engines.values():
            e.update([(u, v, w)])
    for n, e in engines.items():
        assert not sweep_mismatches(e.query, g), n
