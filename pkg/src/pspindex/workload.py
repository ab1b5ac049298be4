"""Random query workloads, stratified by endpoint location or by distance band.

Location classes (every pair ``s != t`` falls in exactly one):

* ``Q1`` both endpoints inside the same partition, neither on the overlay;
* ``Q2`` both endpoints on the overlay (boundary, or core for core-periphery);
* ``Q3`` exactly one endpoint on the overlay;
* ``Q4`` both off the overlay, in different partitions.

Distance bands ``D1..D10`` split ``(l_min, l_max]`` geometrically with ratio
``x = (l_max / l_min) ** (1/10)``; band ``Di`` holds pairs with distance in
``(l_min * x**(i-1), l_min * x**i]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .engines import dijkstra_all
from .errors import InfeasibleStratumError
from .graph import INF, Graph
from .partition import PartitionResult

LOCATION_STRATA = ("Q1", "Q2", "Q3", "Q4")
BAND_STRATA = tuple(f"D{i}" for i in range(1, 11))
STRATA = LOCATION_STRATA + BAND_STRATA

# Road weights are taken to be meters when coordinates are available.
UNITS_PER_KM = 1000
EXACT_DIAMETER_LIMIT = 2000


@dataclass
class QueryWorkload:
    pairs: list[tuple[int, int]]
    tags: list[str] = field(default_factory=list)
    stratum: str | None = None

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def by_tag(self) -> dict[str, list[tuple[int, int]]]:
        out: dict[str, list[tuple[int, int]]] = {}
        for pair, tag in zip(self.pairs, self.tags):
            out.setdefault(tag, []).append(pair)
        return out


def classify_pair(p: PartitionResult, s: int, t: int) -> str:
    ov = p.overlay_vertices()
    a, b = s in ov, t in ov
    if a and b:
        return "Q2"
    if a or b:
        return "Q3"
    return "Q1" if p.region_index_of(s) == p.region_index_of(t) else "Q4"


def _location_pairs(p: PartitionResult, count: int, stratum: str, rng: random.Random):
    ov = sorted(p.overlay_vertices())
    groups: dict[int, list[int]] = {}
    for v in range(p.n):
        if v not in p.overlay_vertices():
            groups.setdefault(p.region_index_of(v), []).append(v)
    inner = [v for r in sorted(groups) for v in groups[r]]
    if stratum == "Q1":
        rs = [r for r in sorted(groups) if len(groups[r]) >= 2]
        if not rs:
            raise InfeasibleStratumError("Q1: no partition has two non-overlay vertices")
        weights = [len(groups[r]) * (len(groups[r]) - 1) for r in rs]
        out = []
        for r in rng.choices(rs, weights=weights, k=count):
            out.append(tuple(rng.sample(groups[r], 2)))
        return out
    if stratum == "Q2":
        if len(ov) < 2:
            raise InfeasibleStratumError("Q2: fewer than two overlay vertices")
        return [tuple(rng.sample(ov, 2)) for _ in range(count)]
    if stratum == "Q3":
        if not ov or not inner:
            raise InfeasibleStratumError("Q3: needs overlay and non-overlay vertices")
        out = []
        for _ in range(count):
            b, x = rng.choice(ov), rng.choice(inner)
            out.append((b, x) if rng.random() < 0.5 else (x, b))
        return out
    nonempty = [r for r in sorted(groups)]
    if len(nonempty) < 2:
        raise InfeasibleStratumError("Q4: fewer than two partitions with non-overlay vertices")
    out = []
    for _ in range(count):
        s = rng.choice(inner)
        rs = p.region_index_of(s)
        rt = rng.choice([r for r in nonempty if r != rs])
        out.append((s, rng.choice(groups[rt])))
    return out


def _approx_diameter(g: Graph, rng: random.Random, sweeps: int = 8) -> int:
    best = 0
    alive = [v for v in range(g.n) if g.adj[v]]
    if not alive:
        return 0
    if len(alive) <= EXACT_DIAMETER_LIMIT:
        starts = alive
        for s in starts:
            d = dijkstra_all(g, s)
            best = max(best, max(d.values()))
        return best
    v = rng.choice(alive)
    for _ in range(sweeps):
        d = dijkstra_all(g, v)
        far = max(d, key=d.__getitem__)
        if d[far] <= best:
            v = rng.choice(alive)
            continue
        best = d[far]
        v = far
    return best


def band_limits(g: Graph, l_min: float | None = None, l_max: float | None = None,
                seed: int = 0) -> list[tuple[float, float]]:
    """The ten ``(lo, hi]`` distance intervals."""
    if l_min is None:
        if g.coords is not None:
            l_min = UNITS_PER_KM
        else:
            l_min = min((w for _, _, w in g.edges() if w > 0), default=1)
    if l_max is None:
        l_max = _approx_diameter(g, random.Random(seed))
    if l_max <= l_min:
        raise InfeasibleStratumError(f"l_max={l_max} does not exceed l_min={l_min}")
    x = (l_max / l_min) ** 0.1
    return [(l_min * x ** (i - 1), l_min * x ** i) for i in range(1, 11)]


def _band_pairs(g: Graph, count: int, lo: float, hi: float, rng: random.Random,
                max_sources: int) -> list[tuple[int, int]]:
    alive = [v for v in range(g.n) if g.adj[v]]
    out: list[tuple[int, int]] = []
    tries = 0
    while len(out) < count:
        if tries >= max_sources:
            raise InfeasibleStratumError(
                f"only {len(out)} of {count} pairs in ({lo:.1f}, {hi:.1f}] after {tries} sources")
        tries += 1
        s = rng.choice(alive)
        d = dijkstra_all(g, s)
        hits = sorted(t for t, x in d.items() if lo < x <= hi and x < INF)
        if not hits:
            continue
        # a few targets per source keeps sampling cheap without clustering too much
        for t in rng.sample(hits, min(len(hits), 4, count - len(out))):
            out.append((s, t))
    return out


def generate_queries(g: Graph, p: PartitionResult | None = None, count: int = 10000,
                     stratum: str | None = None, seed: int = 0, *,
                     l_min: float | None = None, l_max: float | None = None) -> QueryWorkload:
    """``count`` random queries, optionally restricted to one stratum.

    Unstratified pairs are uniform over ``s != t`` and tagged with their
    location class when a partition is given.
    """
    if stratum is not None and stratum not in STRATA:
        raise ValueError(f"unknown stratum {stratum!r}; expected one of {STRATA}")
    if count < 0:
        raise ValueError("count must be non-negative")
    rng = random.Random(seed)
    if stratum in LOCATION_STRATA:
        if p is None:
            raise ValueError(f"stratum {stratum} needs a partition")
        if p.n != g.n:
            raise ValueError("partition does not match graph")
        pairs = _location_pairs(p, count, stratum, rng) if count else []
        return QueryWorkload(pairs, [stratum] * len(pairs), stratum)
    if stratum in BAND_STRATA:
        i = int(stratum[1:])
        lo, hi = band_limits(g, l_min, l_max, seed)[i - 1]
        pairs = _band_pairs(g, count, lo, hi, rng, max_sources=50 * max(count, 1) + g.n)
        return QueryWorkload(pairs, [stratum] * len(pairs), stratum)
    if g.n < 2:
        raise InfeasibleStratumError("need at least two vertices")
    pairs = []
    for _ in range(count):
        s, t = rng.sample(range(g.n), 2)
        pairs.append((s, t))
    tags = [classify_pair(p, s, t) for s, t in pairs] if p is not None else [""] * len(pairs)
    return QueryWorkload(pairs, tags, None)
