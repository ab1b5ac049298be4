"""Acceptance criteria, one test per criterion.

Each test appends a ``CRITERION n: PASS|FAIL|SKIP ...`` line that is shown in
the terminal summary (and printed directly under ``-s``).
"""

import os
import random
import signal
import statistics
import time
from contextlib import contextmanager
from itertools import combinations

import pytest

from pspindex.bench import load_graph
from pspindex.engines import dijkstra_all, make_engine
from pspindex.graph import (DELETE, INSERT, VERTEX_DELETE, VERTEX_INSERT, WeightUpdate,
                            apply_update, generate_updates, grid_graph, random_connected_graph,
                            vertex_edges)
from pspindex.partition import OVERLAY, convert_vertex_cut, partition_growing
from pspindex.presets import PRESETS, build_index, get_preset
from pspindex.strategy import NO, POST, PRE, REBUILD_REQUIRED, STRATEGIES, EngineSpec, PSPIndex
from pspindex.workload import generate_queries

from helpers import CRITERIA_LOG, oracle_table

ENGINE_PAIRS = [
    EngineSpec("ch", "ch"),
    EngineSpec("td", "td"),
    EngineSpec("td", "pll"),
    EngineSpec("ch", "pll", partition_order="mde"),
    EngineSpec("cached", "td"),
    EngineSpec("apt", "apt"),
]
RAW_ENGINES = ("ch", "td", "pll", "apt")


@contextmanager
def criterion(n, title):
    """Record one PASS/FAIL/SKIP line; ``info`` collects the detail shown after it."""
    info: dict = {}
    t0 = time.perf_counter()

    def emit(status):
        detail = ", ".join(f"{k}={v}" for k, v in info.items())
        line = (f"CRITERION {n}: {status} {title} [{time.perf_counter() - t0:.1f}s]"
                + (f" {detail}" if detail else ""))
        CRITERIA_LOG.append(line)
        print(line)

    try:
        yield info
    except pytest.skip.Exception:
        emit("SKIP")
        raise
    except pytest.xfail.Exception:
        emit("FAIL (non-gating)")
        raise
    except BaseException:
        emit("FAIL")
        raise
    emit("PASS")


def desk(name, n):
    """Preset parameters scaled to graphs of a few hundred vertices."""
    return get_preset(name).with_params(k=max(2, n // 25), bandwidth=3,
                                        leaf_size=max(8, n // 6), fanout=2)


def static_fixtures():
    out = [(f"random n={20 + 9 * i}", random_connected_graph(20 + 9 * i, 1000 + i))
           for i in range(20)]
    out.append(("grid 3x3", grid_graph(3, 3)))
    out.append(("grid 8x8", grid_graph(8, 8, seed=8)))
    return out


def sweep(query, g, table):
    bad = []
    for s in range(g.n):
        row = table[s]
        for t in range(s + 1, g.n):
            got = query(s, t)
            if got != row[t]:
                bad.append((s, t, got, row[t]))
    return bad


def vertex_cut_instance(n, seed):
    g = random_connected_graph(n, seed)
    rng = random.Random(seed)
    parts = rng.choice([2, 3, 4])
    home = [rng.randrange(parts) for _ in range(n)]
    cut, assignment = set(), {}
    for v in rng.sample(range(n), max(1, n // 4)):
        nbrs = sorted(g.adj[v])
        if len(nbrs) < 2:
            continue
        rng.shuffle(nbrs)
        others = [q for q in range(parts) if q != home[v]]
        split = rng.randint(1, len(nbrs) - 1)
        assignment[v] = {home[v]: nbrs[:split], rng.choice(others): nbrs[split:]}
        cut.add(v)
    return g, home, cut, assignment


# ---------------------------------------------------------------- 1 and 5

def test_criterion_1_static_oracle_exactness():
    with criterion(1, "static oracle exactness") as info:
        checked = 0
        for label, g in static_fixtures():
            table = oracle_table(g)
            adj = {v: dict(g.adj[v]) for v in range(g.n)}
            for name in sorted(PRESETS):
                bad = sweep(build_index(g, desk(name, g.n), seed=g.n).query, g, table)
                assert not bad, f"{name} on {label}: {bad[:3]}"
                checked += g.n * (g.n - 1) // 2
            for eng in RAW_ENGINES:
                bad = sweep(make_engine(eng, adj).query, g, table)
                assert not bad, f"raw {eng} on {label}: {bad[:3]}"
                checked += g.n * (g.n - 1) // 2
        info.update(graphs=len(static_fixtures()), exact_queries=checked)


def test_criterion_5_strategy_agreement():
    with criterion(5, "strategy agreement on the static sweep") as info:
        checked = 0
        for i, (label, g) in enumerate(static_fixtures()):
            table = oracle_table(g)
            p = partition_growing(g, max(2, min(g.n, g.n // 25)), seed=i)
            eng = ENGINE_PAIRS[i % len(ENGINE_PAIRS)]
            idxs = [PSPIndex(g, p, s, eng, prune=bool(i % 2)) for s in STRATEGIES]
            for s in range(g.n):
                for t in range(s + 1, g.n):
                    got = [idx.query(s, t) for idx in idxs]
                    assert got[0] == got[1] == got[2] == table[s][t], (label, s, t, got)
                    checked += 1
        info.update(queries=checked, strategies=len(STRATEGIES))


# ---------------------------------------------------------------- 2

def test_criterion_2_dynamic_oracle_exactness():
    with criterion(2, "dynamic oracle exactness") as info:
        total = 0
        for j, name in enumerate(sorted(PRESETS)):
            g = random_connected_graph(150, 2000 + j)
            idx = build_index(g, desk(name, g.n), seed=j)
            mirror = g.copy()
            rng = random.Random(j)
            for step, u in enumerate(generate_updates(g, 200, seed=2000 + j)):
                assert idx.update(u) is None
                apply_update(mirror, u)
                pairs = [tuple(rng.sample(range(g.n), 2)) for _ in range(50)]
                dist = {}
                for s, t in pairs:
                    if s not in dist:
                        dist[s] = dijkstra_all(mirror, s)
                    got = idx.query(s, t)
                    assert got == dist[s][t], f"{name} after update {step}: ({s},{t}) {got}"
                total += len(pairs)
            assert idx.graph == mirror
        info.update(presets=len(PRESETS), updates=200, queries=total)


# ---------------------------------------------------------------- 3 and 4

def test_criterion_3_overlay_global_exactness():
    with criterion(3, "no-boundary overlay is globally exact") as info:
        pairs = 0
        for i in range(50):
            k = (2, 4, 8)[i % 3]
            g = random_connected_graph(60 + (i * 37) % 120, 3000 + i)
            p = partition_growing(g, k, seed=i)
            idx = PSPIndex(g, p, NO, ENGINE_PAIRS[i % len(ENGINE_PAIRS)])
            b = sorted(p.overlay_vertices())
            table = oracle_table(g, b)
            for x, y in combinations(b, 2):
                assert idx.Lov.query(x, y) == table[x][y], (i, x, y)
                pairs += 1
        info.update(instances=50, boundary_pairs=pairs)


def test_criterion_4_pruning_preserves_overlay_distances():
    with criterion(4, "pruned overlay distances equal unpruned") as info:
        pairs = removed = 0
        for i in range(50):
            g = random_connected_graph(50 + (i * 13) % 100, 4000 + i)
            p = partition_growing(g, (2, 4, 8)[i % 3], seed=i)
            eng = ENGINE_PAIRS[i % 3]
            full = PSPIndex(g, p, NO, eng, prune=False)
            pruned = PSPIndex(g, p, NO, eng, prune=True)
            removed += full.overlay.edge_count() - pruned.overlay.edge_count()
            b = sorted(p.overlay_vertices())
            for phase in ("build", "updated"):
                for x, y in combinations(b, 2):
                    assert full.Lov.query(x, y) == pruned.Lov.query(x, y), (i, phase, x, y)
                    pairs += 1
                if phase == "build":
                    for u in generate_updates(g, 50, seed=4000 + i):
                        full.update(u)
                        pruned.update(u)
            table = oracle_table(full.graph, b)
            assert all(pruned.Lov.query(x, y) == table[x][y] for x, y in combinations(b, 2))
        info.update(instances=50, pair_checks=pairs, overlay_edges_pruned=removed)


# ---------------------------------------------------------------- 6

def test_criterion_6_counter_claims():
    with criterion(6, "counter claims") as info:
        inter_updates = batches = 0
        worst = 0
        for i in range(10):
            g = random_connected_graph(80 + 10 * i, 6000 + i)
            k = (2, 4, 8)[i % 3]
            p = partition_growing(g, k, seed=i)
            # (a) build-time full-graph searches
            assert PSPIndex(g, p, NO).counters.full_dijkstra_runs == 0
            assert PSPIndex(g, p, POST).counters.full_dijkstra_runs == 0
            assert PSPIndex(g, p, PRE).counters.full_dijkstra_runs == len(p.overlay_vertices())
            # (b) inter-edge updates reach no partition engine
            idx = PSPIndex(g, p, NO)
            inter = [(a, b, w) for a, b, w in g.edges() if p.edge_owner(a, b) == OVERLAY]
            for a, b, w in inter[:20]:
                before = idx.counters.partition_updates
                idx.update(WeightUpdate("increase", a, b, w + 7))
                assert idx.counters.partition_updates == before
                inter_updates += 1
            # (c) one boundary re-check per affected partition per batch
            for strategy in STRATEGIES:
                for size in (10, 50, 200):
                    idx = PSPIndex(g, p, strategy)
                    idx.counters.reset()
                    idx.batch_update(generate_updates(g, size, seed=size + i))
                    assert idx.counters.boundary_rechecks <= k < size * k
                    worst = max(worst, idx.counters.boundary_rechecks / k)
                    batches += 1
        info.update(inter_edge_updates=inter_updates, batches=batches,
                    max_rechecks_over_k=round(worst, 2))


# ---------------------------------------------------------------- 7

def test_criterion_7_structural_updates():
    with criterion(7, "structural updates") as info:
        rounds = 0
        for i, strategy in enumerate(STRATEGIES * 2):
            g = random_connected_graph(60, 7000 + i)
            p = partition_growing(g, 4, seed=i)
            idx = PSPIndex(g, p, strategy, ENGINE_PAIRS[i])
            table = oracle_table(g)
            rng = random.Random(i)
            # delete then reinsert
            for a, b, w in rng.sample(sorted(g.edges()), 15):
                assert idx.update(WeightUpdate(DELETE, a, b)) is None
                assert idx.update(WeightUpdate(INSERT, a, b, w)) is None
                rounds += 1
            assert not sweep(idx.query, g, table)
            # a cross-partition insert through an inner endpoint needs a rebuild
            ov = p.overlay_vertices()
            a, b = next((a, b) for a in range(g.n) for b in range(a + 1, g.n)
                        if a not in ov and b not in ov and not g.has_edge(a, b)
                        and p.region_index_of(a) != p.region_index_of(b))
            assert idx.update(WeightUpdate(INSERT, a, b, 1)) is REBUILD_REQUIRED
            assert idx.graph == g and not sweep(idx.query, g, table)
            # vertex delete / insert
            for v in rng.sample(range(g.n), 8):
                snap = vertex_edges(idx.graph, v)
                assert idx.update(WeightUpdate(VERTEX_DELETE, v)) is None
                assert idx.update(WeightUpdate(VERTEX_INSERT, v, edges=snap)) is None
                rounds += 1
            assert idx.graph == g and not sweep(idx.query, g, table)
        info.update(indexes=6, round_trips=rounds)


# ---------------------------------------------------------------- 8

def test_criterion_8_vertex_cut_conversion():
    with criterion(8, "vertex-cut conversion preserves distances") as info:
        checked = 0
        for i in range(20):
            g, home, cut, assignment = vertex_cut_instance(30 + 5 * i, 8000 + i)
            g2, p2 = convert_vertex_cut(g, home, cut, assignment)
            assert g2.n == g.n + sum(len(assignment[v]) - 1 for v in cut)
            idx = PSPIndex(g2, p2, NO)
            rng = random.Random(i)
            for _ in range(100):
                s, t = rng.sample(range(g.n), 2)
                want = dijkstra_all(g, s)[t]
                assert dijkstra_all(g2, s)[t] == want, (i, s, t)
                assert idx.query(s, t) == want, (i, s, t)
                checked += 1
        info.update(instances=20, pairs=checked)


# ---------------------------------------------------------------- 9

@contextmanager
def _wall_clock(seconds):
    """Raise TimeoutError in the main thread once ``seconds`` have elapsed."""
    def fire(signum, frame):
        raise TimeoutError(f"budget of {seconds}s exhausted")
    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _medians(g, p, ups, queries, budget, deadline):
    """Median update time for no/pre, and median same-partition query time for no/post."""
    eng = EngineSpec("td", "td")
    out = {}

    def timed(fn, items):
        ts = []
        for x in items:
            if time.perf_counter() > deadline:
                raise TimeoutError(f"budget of {budget}s exhausted")
            t0 = time.perf_counter()
            fn(x)
            ts.append(time.perf_counter() - t0)
        return statistics.median(ts)

    idx = PSPIndex(g, p, NO, eng)
    out["q_no"] = timed(lambda st: idx.query(*st), queries)
    out["u_no"] = timed(idx.update, ups)
    idx = PSPIndex(g, p, POST, eng)
    out["q_post"] = timed(lambda st: idx.query(*st), queries)
    idx = None
    idx = PSPIndex(g, p, PRE, eng)
    out["u_pre"] = timed(idx.update, ups)
    return out


def test_criterion_9_directional_timing(bench_mode):
    strict = bench_mode == "strict"
    with criterion(9, f"directional timing ({bench_mode})") as info:
        if strict:
            side, k, samples, budget = 256, 32, 100, 15 * 60
        else:
            side, k, samples, budget = 40, 8, 30, 10 * 60
        start = time.perf_counter()
        info.update(grid=f"{side}x{side}", k=k, samples=samples)
        try:
            with _wall_clock(budget):
                g = grid_graph(side, side, seed=9)
                p = partition_growing(g, k, seed=9)
                ups = generate_updates(g, samples, seed=9)
                queries = generate_queries(g, p, samples, "Q1", seed=9).pairs
                m = _medians(g, p, ups, queries, budget, start + budget)
        except TimeoutError as e:
            info.update(error=str(e))
            raise AssertionError(f"runtime budget exceeded: {e}") from None
        info.update(**{key: f"{v * 1e6:.0f}us" for key, v in m.items()})
        ok = m["u_no"] < m["u_pre"] and m["q_post"] <= m["q_no"]
        if not ok and not strict:
            pytest.xfail("direction not observed at desk scale")
        assert m["u_no"] < m["u_pre"], "no-boundary update not faster than pre-boundary"
        assert m["q_post"] <= m["q_no"], "post-boundary same-partition query slower than no-boundary"
        assert time.perf_counter() - start < budget


# ---------------------------------------------------------------- 10

def _scale_smoke(g, n_queries, subsample, seed):
    idx = build_index(g, "N-CH-P", seed=seed)
    wl = generate_queries(g, idx.partition, n_queries, seed=seed)
    answers = [idx.query(s, t) for s, t in wl.pairs]
    rng = random.Random(seed)
    sub = sorted(rng.sample(range(len(answers)), min(subsample, len(answers))))
    by_src = {}
    for i in sub:
        by_src.setdefault(wl.pairs[i][0], []).append(i)
    for s, items in by_src.items():
        d = dijkstra_all(g, s)
        for i in items:
            assert answers[i] == d[wl.pairs[i][1]], wl.pairs[i]
    return len(answers), len(sub)


def test_criterion_10_scale_smoke():
    path = os.environ.get("PSP_NY_GRAPH")
    with criterion(10, "NY scale smoke test") as info:
        if not path:
            pytest.skip("set PSP_NY_GRAPH to a DIMACS .gr file of the NY network")
        start = time.perf_counter()
        g = load_graph(path, coords=os.environ.get("PSP_NY_COORDS"))
        info.update(n=g.n, m=g.m)
        answered, checked = _scale_smoke(g, 10000, 1000, seed=10)
        info.update(queries=answered, verified=checked)
        assert time.perf_counter() - start < 30 * 60


def test_criterion_10_synthetic_smoke():
    with criterion("10-synthetic", "scaled synthetic smoke test") as info:
        g = grid_graph(70, 70, seed=10)
        answered, checked = _scale_smoke(g, 10000, 1000, seed=10)
        info.update(n=g.n, m=g.m, queries=answered, verified=checked)
