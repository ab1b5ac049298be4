"""Partitioned shortest-path indexes under the three maintenance strategies.

An index is a set of partition (region) indexes plus one overlay index. The
strategies differ in what the region indexes see:

``pre-boundary``
    Global boundary-pair distances are computed first (one full search per
    boundary vertex) and inserted into every region graph before indexing.
``no-boundary``
    Regions are indexed raw; overlay shortcuts are local boundary distances.
    Same-region queries concatenate through the overlay.
``post-boundary``
    Like ``no-boundary``, then every region gets a repaired copy whose
    boundary pairs carry overlay (global) distances. Both copies are kept so
    that the local family can still be maintained exactly.
"""

from __future__ import annotations

import copy
import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Sequence

from .engines import CHIndex, dijkstra_all, make_engine
from .engines.ch import ch_search
from .errors import VertexRangeError
from .graph import (INF, INSERT, VERTEX_INSERT, Graph, WeightUpdate,
                    edge_key, expand_update)
from .partition import (OVERLAY, PartitionResult, boundary_pairs, build_overlay,
                        classify_boundaries, partition_components, region_pairs)

log = logging.getLogger(__name__)

PRE = "pre-boundary"
NO = "no-boundary"
POST = "post-boundary"
STRATEGIES = (PRE, NO, POST)

Pair = tuple[int, int]


class Signal(enum.Enum):
    REBUILD_REQUIRED = "rebuild-required"


REBUILD_REQUIRED = Signal.REBUILD_REQUIRED


@dataclass
class Counters:
    full_dijkstra_runs: int = 0
    partition_queries: int = 0
    overlay_queries: int = 0
    partition_updates: int = 0
    overlay_updates: int = 0
    boundary_rechecks: int = 0
    shortcuts_touched: int = 0
    query_partition_touches: int = 0

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def snapshot(self) -> "Counters":
        return Counters(**asdict(self))

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class EngineSpec:
    """Engine choice for the two layers.

    ``partition_order`` is ``"boundary-first"`` (region boundaries ranked on
    top) or ``"mde"``. ``overlay_source`` is ``"query"`` (overlay shortcut per
    boundary pair, from region-index queries) or ``"shortcuts"`` (boundary
    shortcuts read straight out of a CH region index). ``union_query`` answers
    queries with one upward search over the union of CH label sets.
    """

    partition: str = "ch"
    overlay: str = "ch"
    partition_order: str = "boundary-first"
    overlay_source: str = "query"
    union_query: bool = False


class PSPIndex:
    def __init__(self, g: Graph, p: PartitionResult, strategy: str,
                 engines: EngineSpec = EngineSpec(), prune: bool = False, threads: int = 1,
                 overlay_groups: Sequence[Iterable[int]] | None = None):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        if p.n != g.n:
            raise ValueError("partition does not match graph")
        self.g = g.copy()
        self.p = p
        self.strategy = strategy
        self.engines = engines
        self.prune = prune
        self.threads = max(1, int(threads))
        self.overlay_groups = [list(x) for x in overlay_groups] if overlay_groups else None
        self.counters = Counters()
        if engines.overlay_source == "shortcuts" and (engines.partition != "ch" or prune
                                                      or strategy != NO):
            raise ValueError("shortcut-sourced overlays need unpruned no-boundary CH regions")
        self._setup_layout()
        self._build()

    # ================================================================ layout

    def _setup_layout(self) -> None:
        p, g = self.p, self.g
        self.regions = p.regions()
        self.ov_vertices = p.overlay_vertices()
        self.region_adj: list[dict[int, dict[int, int]]] = [
            {v: {} for v in sorted(reg.vertices)} for reg in self.regions]
        for u, v, w in g.edges():
            r = p.edge_owner(u, v)
            if r != OVERLAY:
                self.region_adj[r][u][v] = w
                self.region_adj[r][v][u] = w
        self.home = [p.region_index_of(v) for v in range(g.n)]
        self.full_pairs = [boundary_pairs(reg.boundary) for reg in self.regions]
        self.bclass = classify_boundaries(g, p) if self.prune else None
        self.ov_pairs = region_pairs(g, p, self.prune, self.bclass) if self.prune else self.full_pairs
        if self.engines.partition == "td":
            comps = partition_components(g, p)
            if any(c > 1 for c in comps):
                log.warning("TD regions with %d disconnected partitions: indexing each "
                            "component separately", sum(1 for c in comps if c > 1))

    def _map(self, fn, items):
        items = list(items)
        if self.threads > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as ex:
                return list(ex.map(fn, items))
        return [fn(x) for x in items]

    def _region_engine(self, r: int, adj: dict[int, dict[int, int]]):
        groups = None
        if self.engines.partition_order == "boundary-first":
            groups = [self.regions[r].boundary]
        return make_engine(self.engines.partition, adj, groups=groups,
                           sources=self.regions[r].boundary)

    def _overlay_engine(self):
        return make_engine(self.engines.overlay, self.overlay.adjacency(),
                           groups=self.overlay_groups)

    # ================================================================ build

    def _build(self) -> None:
        n_reg = len(self.regions)
        if self.strategy == PRE:
            self.gsc = self._global_boundary_distances()
            adjs = [self._augmented_adj(r, self.gsc[r]) for r in range(n_reg)]
            self.L = self._map(lambda r: self._region_engine(r, adjs[r]), range(n_reg))
            weights = {r: {pr: self.gsc[r][pr] for pr in self.ov_pairs[r]} for r in range(n_reg)}
            self.overlay = build_overlay(self.p, weights, self.g, self.ov_pairs, self.prune)
            self.Lov = self._overlay_engine()
            return
        self.L = self._map(lambda r: self._region_engine(r, self.region_adj[r]), range(n_reg))
        if self.engines.overlay_source == "shortcuts":
            self.ov_pairs = [self._shortcut_pairs(r) for r in range(n_reg)]
            weights = {r: {pr: self.L[r].shortcut(*pr) for pr in self.ov_pairs[r]}
                       for r in range(n_reg)}
        else:
            weights = {r: self._local_pair_weights(r, self.ov_pairs[r]) for r in range(n_reg)}
        self.overlay = build_overlay(self.p, weights, self.g, self.ov_pairs, self.prune)
        self.Lov = self._overlay_engine()
        if self.strategy == POST:
            self.gsc = [self._overlay_pair_weights(r) for r in range(n_reg)]

            def repair(r: int):
                eng = copy.deepcopy(self.L[r])
                changes = self._augment_changes(r, {}, self.gsc[r])
                if changes:
                    eng.update(changes)
                return eng

            self.Lp = self._map(repair, range(n_reg))

    def _shortcut_pairs(self, r: int) -> list[Pair]:
        eng: CHIndex = self.L[r]
        out = []
        for b in self.regions[r].boundary:
            for u in eng.up[b]:
                out.append(edge_key(b, u))
        return sorted(set(out))

    def _augmented_adj(self, r: int, sc: dict[Pair, int]) -> dict[int, dict[int, int]]:
        adj = {v: dict(n) for v, n in self.region_adj[r].items()}
        for (a, b), w in sc.items():
            if w < adj[a].get(b, INF):
                adj[a][b] = w
                adj[b][a] = w
        return adj

    def _effective(self, r: int, pair: Pair, sc: dict[Pair, int]) -> int:
        a, b = pair
        return min(self.region_adj[r][a].get(b, INF), sc.get(pair, INF))

    def _augment_changes(self, r: int, old_sc: dict[Pair, int], new_sc: dict[Pair, int]
                         ) -> list[tuple[int, int, int]]:
        """Engine changes turning a region graph with ``old_sc`` into one with ``new_sc``."""
        out = []
        for pair, w in new_sc.items():
            before = min(self.region_adj[r][pair[0]].get(pair[1], INF), old_sc.get(pair, INF))
            after = min(self.region_adj[r][pair[0]].get(pair[1], INF), w)
            if before != after:
                out.append((pair[0], pair[1], after))
        return out

    def _global_boundary_distances(self) -> list[dict[Pair, int]]:
        """One full-graph search per boundary vertex, stopping at its region peers."""
        peers: dict[int, set[int]] = {}
        for reg in self.regions:
            for b in reg.boundary:
                peers.setdefault(b, set()).update(reg.boundary)
        dist: dict[int, dict[int, int]] = {}
        for b in sorted(peers):
            self.counters.full_dijkstra_runs += 1
            dist[b] = dijkstra_all(self.g, b, peers[b])
        return [{(a, c): dist[a].get(c, INF) for a, c in pairs} for pairs in self.full_pairs]

    def _local_pair_weights(self, r: int, pairs: Sequence[Pair]) -> dict[Pair, int]:
        eng = self.L[r]
        by_src: dict[int, list[int]] = {}
        for a, b in pairs:
            by_src.setdefault(a, []).append(b)
        out = {}
        for a, targets in by_src.items():
            self.counters.partition_queries += len(targets)
            for b, d in zip(targets, eng.one_to_many(a, targets)):
                out[(a, b)] = d
        return out

    def _overlay_pair_weights(self, r: int) -> dict[Pair, int]:
        by_src: dict[int, list[int]] = {}
        for a, b in self.full_pairs[r]:
            by_src.setdefault(a, []).append(b)
        out = {}
        for a, targets in by_src.items():
            self.counters.overlay_queries += len(targets)
            for b, d in zip(targets, self.Lov.one_to_many(a, targets)):
                out[(a, b)] = d
        return out

    # ================================================================ query

    def _check(self, v: int) -> None:
        if not 0 <= v < self.g.n:
            raise VertexRangeError(f"vertex {v} outside [0, {self.g.n})")

    def query(self, s: int, t: int) -> int:
        self._check(s)
        self._check(t)
        if s == t:
            return 0
        if self.engines.union_query:
            return self._union_query(s, t)
        s_ov, t_ov = s in self.ov_vertices, t in self.ov_vertices
        if s_ov and t_ov:
            self.counters.overlay_queries += 1
            return self.Lov.query(s, t)
        rs, rt = self.home[s], self.home[t]
        if rs != OVERLAY and (rs == rt or (t_ov and t in self.regions[rs].vertices)):
            return self._same_region(rs, s, t)
        if rt != OVERLAY and s_ov and s in self.regions[rt].vertices:
            return self._same_region(rt, t, s)
        return self._cross(s, rs, t, rt)

    def _family(self, r: int):
        return self.Lp[r] if self.strategy == POST else self.L[r]

    def _to_boundary(self, r: int, v: int, eng) -> dict[int, int]:
        bnd = self.regions[r].boundary
        self.counters.partition_queries += len(bnd)
        return {b: d for b, d in zip(bnd, eng.one_to_many(v, bnd)) if d < INF}

    def _same_region(self, r: int, s: int, t: int) -> int:
        self.counters.query_partition_touches += 1
        if self.strategy != NO:
            self.counters.partition_queries += 1
            return self._family(r).query(s, t)
        eng = self.L[r]
        self.counters.partition_queries += 1
        best = eng.query(s, t)
        src = self._to_boundary(r, s, eng)
        dst = self._to_boundary(r, t, eng)
        if src and dst:
            self.counters.overlay_queries += 1
            via = self.Lov.multi_query(src, dst)
            if via < best:
                best = via
        return best

    def _cross(self, s: int, rs: int, t: int, rt: int) -> int:
        if rs == OVERLAY:
            src = {s: 0}
        else:
            self.counters.query_partition_touches += 1
            src = self._to_boundary(rs, s, self._family(rs))
        if rt == OVERLAY:
            dst = {t: 0}
        else:
            self.counters.query_partition_touches += 1
            dst = self._to_boundary(rt, t, self._family(rt))
        if not src or not dst:
            return INF
        self.counters.overlay_queries += 1
        return self.Lov.multi_query(src, dst)

    def _union_query(self, s: int, t: int) -> int:
        labels = [self.Lov.up]
        for v in (s, t):
            r = self.home[v]
            if r != OVERLAY:
                self.counters.query_partition_touches += 1
                up = self.L[r].up
                if all(up is not x for x in labels):
                    labels.append(up)
        if len(labels) == 1:
            self.counters.overlay_queries += 1
        return ch_search(labels, {s: 0}, {t: 0})

    def one_to_many(self, s: int, targets: Sequence[int]) -> list[int]:
        return [self.query(s, t) for t in targets]

    # ================================================================ updates

    def update(self, upd: WeightUpdate) -> Signal | None:
        """Apply one update; returns :data:`REBUILD_REQUIRED` for unsupported inserts."""
        return self.batch_update([upd])

    def structural_update(self, upd: WeightUpdate) -> Signal | None:
        return self.update(upd)

    def _insert_case(self, u: int, v: int) -> int:
        """1 = inside a region, 2 = between overlay vertices, 3 = needs repartitioning."""
        p = self.p
        if u in self.ov_vertices and v in self.ov_vertices:
            r = p.edge_owner(u, v)
            return 2 if r == OVERLAY else 1
        for r in set(p.home_regions(u)) & set(p.home_regions(v)):
            if p.edge_owner(u, v) == r:
                return 1
        return 3

    def batch_update(self, updates: Sequence[WeightUpdate]) -> Signal | None:
        """Apply a batch; per edge the last update wins.

        The whole batch is rejected (nothing mutated) if any insertion would
        cross a partition through a non-boundary endpoint.
        """
        steps: list[tuple[int, int, int]] = []
        scratch = self.g.copy()
        for upd in updates:
            if upd.kind in (INSERT, VERTEX_INSERT) and not 0 <= upd.u < self.g.n:
                return REBUILD_REQUIRED
            for u, v, w in expand_update(scratch, upd):
                if upd.kind in (INSERT, VERTEX_INSERT) and self._insert_case(u, v) == 3:
                    return REBUILD_REQUIRED
                scratch.set_weight(u, v, w)
                steps.append((u, v, w))
        self._apply_steps(steps)
        return None

    def _apply_steps(self, steps: Sequence[tuple[int, int, int]]) -> None:
        final: dict[Pair, int] = {}
        for u, v, w in steps:
            final[edge_key(u, v)] = w
        per_region: dict[int, list[tuple[int, int, int]]] = {}
        base: list[tuple[Pair, int]] = []
        for pair, w in final.items():
            if self.g.weight(*pair) == w:
                continue
            self.g.set_weight(pair[0], pair[1], w)
            r = self.p.edge_owner(*pair)
            if r == OVERLAY:
                base.append((pair, w))
            else:
                a, b = pair
                if w < INF:
                    self.region_adj[r][a][b] = w
                    self.region_adj[r][b][a] = w
                else:
                    self.region_adj[r][a].pop(b, None)
                    self.region_adj[r][b].pop(a, None)
                per_region.setdefault(r, []).append((a, b, w))
        if not per_region and not base:
            return
        if self.strategy == PRE:
            self._update_pre(per_region, base)
        else:
            changed = self._update_local(per_region, base)
            if self.strategy == POST:
                self._update_repaired(per_region, changed)

    def _set_overlay(self, touched: dict[Pair, int], r: int | None, pair: Pair, w: int) -> None:
        if pair not in touched:
            touched[pair] = self.overlay.weight(*pair)
        if r is None:
            if w < INF:
                self.overlay.base[pair] = w
            else:
                self.overlay.base.pop(pair, None)
        else:
            self.overlay.set_shortcut(r, pair, w)

    def _flush_overlay(self, touched: dict[Pair, int]) -> bool:
        changes = []
        for pair, old in touched.items():
            new = self.overlay.weight(*pair)
            if new != old:
                changes.append((pair[0], pair[1], new))
        if changes:
            self.counters.overlay_updates += 1
            self.counters.shortcuts_touched += len(self.Lov.update(changes))
        return bool(changes)

    def _update_local(self, per_region, base) -> bool:
        """Maintain the raw region family and the overlay; True if overlay changed."""
        touched: dict[Pair, int] = {}
        for pair, w in base:
            self._set_overlay(touched, None, pair, w)
        for r, chs in sorted(per_region.items()):
            eng = self.L[r]
            self.counters.partition_updates += 1
            report = eng.update(chs)
            self.counters.shortcuts_touched += len(report)
            self.counters.boundary_rechecks += 1
            if self.engines.overlay_source == "shortcuts":
                pairs = self._shortcut_pairs(r)
                if pairs != self.ov_pairs[r]:
                    self.ov_pairs[r] = pairs
                    for pr in pairs:
                        self._set_overlay(touched, r, pr, eng.shortcut(*pr))
                else:
                    bset = set(self.regions[r].boundary)
                    for c in report:
                        if c.u in bset and c.v in bset:
                            self._set_overlay(touched, r, edge_key(c.u, c.v), c.new)
            else:
                sc = self.overlay.shortcuts[r]
                for pr, w in self._local_pair_weights(r, self.ov_pairs[r]).items():
                    if sc.get(pr) != w:
                        self._set_overlay(touched, r, pr, w)
        return self._flush_overlay(touched)

    def _update_repaired(self, per_region, overlay_changed: bool) -> None:
        todo = set(per_region)
        new_sc: dict[int, dict[Pair, int]] = {}
        if overlay_changed:
            for r in range(len(self.regions)):
                fresh = self._overlay_pair_weights(r)
                if fresh != self.gsc[r]:
                    new_sc[r] = fresh
                    todo.add(r)
        for r in sorted(todo):
            old = self.gsc[r]
            new = new_sc.get(r, old)
            changes = {}
            for a, b, w in per_region.get(r, ()):
                changes[edge_key(a, b)] = min(w, new.get(edge_key(a, b), INF))
            for a, b, w in self._augment_changes(r, old, new):
                changes[edge_key(a, b)] = w
            self.gsc[r] = new
            if changes:
                self.counters.partition_updates += 1
                rep = self.Lp[r].update([(a, b, w) for (a, b), w in changes.items()])
                self.counters.shortcuts_touched += len(rep)

    def _update_pre(self, per_region, base) -> None:
        fresh = self._global_boundary_distances()
        touched: dict[Pair, int] = {}
        for pair, w in base:
            self._set_overlay(touched, None, pair, w)
        for r in range(len(self.regions)):
            self.counters.boundary_rechecks += 1
            old, new = self.gsc[r], fresh[r]
            changes = {}
            for a, b, w in per_region.get(r, ()):
                changes[edge_key(a, b)] = min(w, new.get(edge_key(a, b), INF))
            for a, b, w in self._augment_changes(r, old, new):
                changes[edge_key(a, b)] = w
            self.gsc[r] = new
            if changes:
                self.counters.partition_updates += 1
                rep = self.L[r].update([(a, b, w) for (a, b), w in changes.items()])
                self.counters.shortcuts_touched += len(rep)
            sc = self.overlay.shortcuts[r]
            for pr in self.ov_pairs[r]:
                if sc.get(pr) != new[pr]:
                    self._set_overlay(touched, r, pr, new[pr])
        self._flush_overlay(touched)

    # ================================================================ info

    @property
    def graph(self) -> Graph:
        return self.g

    def stats(self) -> dict:
        def total(engs):
            out: dict[str, int] = {}
            for e in engs:
                for k, v in e.stats().items():
                    if k.startswith("max") or k in ("height", "width"):
                        out[k] = max(out.get(k, 0), v)
                    else:
                        out[k] = out.get(k, 0) + v
            return out

        st = {"strategy": self.strategy, "regions": len(self.regions),
              "overlay_vertices": len(self.ov_vertices),
              "overlay_edges": self.overlay.edge_count(),
              "overlay_shortcuts": self.overlay.shortcut_count(),
              "partition_index": total(self.L), "overlay_index": self.Lov.stats()}
        if self.strategy == POST:
            st["repaired_index"] = total(self.Lp)
        return st


# ================================================================ builders

def build_pre_boundary(g: Graph, p: PartitionResult, engines: EngineSpec = EngineSpec(),
                       prune: bool = False, **kw) -> PSPIndex:
    return PSPIndex(g, p, PRE, engines, prune, **kw)


def build_no_boundary(g: Graph, p: PartitionResult, engines: EngineSpec = EngineSpec(),
                      prune: bool = False, **kw) -> PSPIndex:
    return PSPIndex(g, p, NO, engines, prune, **kw)


def build_post_boundary(g: Graph, p: PartitionResult, engines: EngineSpec = EngineSpec(),
                        prune: bool = False, **kw) -> PSPIndex:
    return PSPIndex(g, p, POST, engines, prune, **kw)


def psp_query(idx: PSPIndex, s: int, t: int) -> int:
    return idx.query(s, t)


def _require(idx: PSPIndex, strategy: str) -> None:
    if idx.strategy != strategy:
        raise ValueError(f"index uses {idx.strategy}, not {strategy}")


def update_pre_boundary(idx: PSPIndex, upd: WeightUpdate) -> Signal | None:
    _require(idx, PRE)
    return idx.update(upd)


def update_no_boundary(idx: PSPIndex, upd: WeightUpdate) -> Signal | None:
    _require(idx, NO)
    return idx.update(upd)


def update_post_boundary(idx: PSPIndex, upd: WeightUpdate) -> Signal | None:
    _require(idx, POST)
    return idx.update(upd)


def batch_update(idx: PSPIndex, updates: Sequence[WeightUpdate]) -> Signal | None:
    return idx.batch_update(updates)


def structural_update(idx: PSPIndex, upd: WeightUpdate) -> Signal | None:
    return idx.structural_update(upd)


__all__ = [
    "Counters", "EngineSpec", "NO", "POST", "PRE", "PSPIndex", "REBUILD_REQUIRED",
    "STRATEGIES", "Signal", "batch_update", "build_no_boundary", "build_post_boundary",
    "build_pre_boundary", "psp_query", "structural_update", "update_no_boundary",
    "update_post_boundary", "update_pre_boundary",
]
