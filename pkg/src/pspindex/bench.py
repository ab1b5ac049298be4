"""Benchmark pipeline: configuration, oracle verification and reports."""

from __future__ import annotations

import json
import random
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from itertools import combinations
from pathlib import Path

from .engines import TDIndex, dijkstra_all
from .errors import ConfigError
from .graph import INF, Graph, generate_updates, grid_graph, random_connected_graph
from .io import FORMATS, guess_format, parse_graph, parse_queries, parse_updates, read_coordinates
from .partition import ingest_partition_file, partition_metrics
from .presets import PRESETS, IndexDescriptor, build_index, get_preset
from .serialize import index_bytes
from .strategy import REBUILD_REQUIRED, PSPIndex
from .workload import STRATA, generate_queries

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

VERIFY_MODES = ("on", "off", "exhaustive")
EXHAUSTIVE_LIMIT = 500
DEFAULT_GRAPH = "grid:3x3"
INT_KEYS = ("k", "bandwidth", "fanout", "leaf", "batch", "seed", "threads", "repeat", "sample")


@dataclass
class RunConfig:
    graph: str = DEFAULT_GRAPH
    format: str | None = None
    coords: str | None = None
    index: str = "N-CH-P"
    strategy: str | None = None
    overlay_engine: str | None = None
    partition_engine: str | None = None
    structure: str | None = None
    k: int | None = None
    bandwidth: int | None = None
    fanout: int | None = None
    leaf: int | None = None
    prune: bool = False
    partition_file: str | None = None
    queries: str = "1000"
    stratum: str | None = None
    updates: str = "0"
    batch: int = 1
    seed: int = 0
    threads: int = 1
    repeat: int = 5
    verify: str = "on"
    sample: int = 1000
    report: str | None = None

    def __post_init__(self) -> None:
        for f in fields(self):
            val = getattr(self, f.name)
            if val is None and "None" in f.type:
                continue
            want = int if f.name in INT_KEYS else bool if f.name == "prune" else str
            if not isinstance(val, want) or (want is int and isinstance(val, bool)):
                raise ConfigError(f"{f.name} must be {want.__name__}, got {val!r}")
        if self.verify not in VERIFY_MODES:
            raise ConfigError(f"verify must be one of {VERIFY_MODES}")
        if self.format is not None and self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.stratum is not None and self.stratum not in STRATA:
            raise ConfigError(f"unknown stratum {self.stratum!r}")
        if self.batch < 1 or self.repeat < 1 or self.threads < 1:
            raise ConfigError("batch, repeat and threads must be positive")

    def descriptor(self) -> IndexDescriptor:
        if self.index.lower() == "custom":
            base = IndexDescriptor()
        else:
            base = get_preset(self.index)
        return base.with_params(strategy=self.strategy, overlay_engine=self.overlay_engine,
                                partition_engine=self.partition_engine, structure=self.structure,
                                k=self.k, bandwidth=self.bandwidth, fanout=self.fanout,
                                leaf_size=self.leaf, prune=self.prune or None)


CONFIG_KEYS = {f.name for f in fields(RunConfig)}


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Flat TOML document, then non-``None`` overrides on top."""
    data: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from None
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"invalid config {path}: {e}") from None
        data = {k.replace("-", "_"): v for k, v in data.items()}
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        nested = [k for k, v in data.items() if isinstance(v, dict)]
        if nested:
            raise ConfigError(f"config must be flat; tables found: {nested}")
    for k, v in (overrides or {}).items():
        if v is not None:
            data[k] = v
    for key in ("queries", "updates"):
        if key in data:
            data[key] = str(data[key])
    try:
        return RunConfig(**data)
    except TypeError as e:
        raise ConfigError(str(e)) from None


# ================================================================ inputs

def load_graph(spec: str, format: str | None = None, coords: str | None = None) -> Graph:
    """A graph file, or ``grid:RxC[:seed]`` / ``random:N[:seed]`` fixtures."""
    if spec.startswith("grid:"):
        parts = spec[5:].split(":")
        try:
            r, c = (int(x) for x in parts[0].lower().split("x"))
        except ValueError:
            raise ConfigError(f"bad grid spec {spec!r}; expected grid:RxC[:seed]") from None
        return grid_graph(r, c, seed=int(parts[1]) if len(parts) > 1 else None)
    if spec.startswith("random:"):
        parts = spec[7:].split(":")
        return random_connected_graph(int(parts[0]), int(parts[1]) if len(parts) > 1 else 0)
    path = Path(spec)
    if not path.is_file():
        raise ConfigError(f"graph file not found: {spec}")
    g = parse_graph(path, format or guess_format(spec))
    if coords:
        read_coordinates(Path(coords), g)
    return g


def _maybe_count(text: str) -> int | None:
    try:
        return int(text)
    except ValueError:
        return None


# ================================================================ verification

@dataclass
class Verdict:
    status: str
    checked: int = 0
    failures: list[tuple[int, int, int, int]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"status": self.status, "checked": self.checked,
                "failures": [list(f) for f in self.failures]}


def cmd_verify(idx: PSPIndex, g: Graph, sample: int | str = 1000, seed: int = 0,
               max_failures: int = 20) -> Verdict:
    """Compare index answers against Dijkstra on ``g``.

    ``sample`` is a pair count or ``"exhaustive"`` (all unordered pairs).
    Failures are ``(s, t, index_answer, oracle)`` tuples.
    """
    if sample == "exhaustive":
        pairs = list(combinations(range(g.n), 2))
    else:
        rng = random.Random(seed)
        pairs = [tuple(rng.sample(range(g.n), 2)) for _ in range(int(sample))] if g.n > 1 else []
    by_src: dict[int, list[int]] = {}
    for s, t in pairs:
        by_src.setdefault(s, []).append(t)
    failures = []
    for s in sorted(by_src):
        dist = dijkstra_all(g, s)
        for t in by_src[s]:
            got, want = idx.query(s, t), dist.get(t, INF)
            if got != want:
                failures.append((s, t, got, want))
    status = "failed" if failures else "verified"
    return Verdict(status, len(pairs), failures[:max_failures])


def _label_slots(eng):
    """``(a, b, row, key)`` for every positive stored distance of ``eng``."""
    if isinstance(eng, TDIndex):
        for v, row in eng.dis.items():
            for i, d in enumerate(row):
                if 0 < d < INF:
                    yield v, eng.anc[v][i], row, i
    elif hasattr(eng, "labels"):
        for v, lab in eng.labels.items():
            for h, d in lab.items():
                if 0 < d < INF:
                    yield v, h, lab, h
    elif hasattr(eng, "up"):
        for v, up in eng.up.items():
            for u, d in up.items():
                if 0 < d < INF:
                    yield v, u, up, u
    elif hasattr(eng, "cache"):
        for b, row in eng.cache.items():
            for u, d in row.items():
                if 0 < d < INF:
                    yield b, u, row, u


def plant_fault(idx: PSPIndex, max_tries: int = 10000) -> tuple[int, int] | None:
    """Zero one stored distance so that some query answer changes (tests only).

    Entries the query path never reads are skipped. Returns the pair whose
    answer was corrupted, or ``None`` if the index stores no usable entry.
    """
    family = idx.Lp if idx.strategy == "post-boundary" else idx.L
    tries = 0
    for eng in list(family) + [idx.Lov]:
        for a, b, row, key in _label_slots(eng):
            tries += 1
            if tries > max_tries:
                return None
            before = idx.query(a, b)
            old = row[key]
            row[key] = 0
            if hasattr(eng, "_spaces"):
                eng._spaces.clear()
            if idx.query(a, b) != before:
                return a, b
            row[key] = old
            if hasattr(eng, "_spaces"):
                eng._spaces.clear()
    return None


# ================================================================ report

def _latency(samples: list[float], seed: int) -> dict:
    if not samples:
        return {"count": 0, "seed": seed}
    s = sorted(samples)
    p99 = s[min(len(s) - 1, int(round(0.99 * (len(s) - 1))))]
    return {"count": len(s), "seed": seed, "median_us": round(statistics.median(s) * 1e6, 3),
            "p99_us": round(p99 * 1e6, 3)}


def index_entries(idx: PSPIndex) -> int:
    st = idx.stats()
    total = 0
    for key in ("partition_index", "overlay_index", "repaired_index"):
        part = st.get(key, {})
        total += part.get("label_entries", part.get("shortcuts", 0))
    return total


@dataclass
class BenchReport:
    config: dict
    partition: dict
    index: dict
    queries: dict
    updates: dict
    counters: dict
    verdict: dict
    timings: dict

    def machine(self) -> dict:
        """Everything except wall-clock values, which live under ``timings``."""
        d = asdict(self)
        d.pop("timings")
        return d

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def table(self) -> str:
        rows = [("index", self.config["index"]), ("strategy", self.index["strategy"]),
                ("graph", f"n={self.partition['n']} m={self.partition['m']}"),
                ("partitions", self.partition["k"]),
                ("|B|", self.partition["total_boundary"]),
                ("R_C", self.partition["connectivity_ratio"]),
                ("index entries", self.index["entries"]), ("index bytes", self.index["bytes"])]
        t = self.timings
        rows.append(("t_c median (s)", t["build"]["median_s"]))
        for tag, lat in sorted(t["queries"].items()):
            if lat["count"]:
                rows.append((f"t_q {tag} median/p99 (us)", f"{lat['median_us']} / {lat['p99_us']}"))
        for kind, lat in sorted(t["updates"].items()):
            if lat["count"]:
                rows.append((f"t_u {kind} median/p99 (us)", f"{lat['median_us']} / {lat['p99_us']}"))
        for k, v in self.counters["total"].items():
            rows.append((k, v))
        rows.append(("verdict", f"{self.verdict['status']} ({self.verdict['checked']} pairs)"))
        width = max(len(str(r[0])) for r in rows)
        return "\n".join(f"{str(k).ljust(width)}  {v}" for k, v in rows)


def cmd_run(cfg: RunConfig, inject_fault: bool = False) -> tuple[BenchReport, PSPIndex]:
    desc = cfg.descriptor()
    g = load_graph(cfg.graph, cfg.format, cfg.coords)
    part = None
    if cfg.partition_file:
        try:
            with open(cfg.partition_file) as fh:
                part = ingest_partition_file(g, fh)
        except OSError as e:
            raise ConfigError(f"cannot read partition file: {e}") from None

    build_times = []
    idx = None
    for _ in range(cfg.repeat):
        t0 = time.perf_counter()
        idx = build_index(g, desc, cfg.seed, partition=part, threads=cfg.threads)
        build_times.append(time.perf_counter() - t0)
    assert idx is not None
    build_counters = idx.counters.as_dict()
    if inject_fault:
        plant_fault(idx)
    p = idx.partition
    pm = partition_metrics(g, p)
    part_info = {"n": g.n, "m": g.m, "k": p.k, "structure": p.structure,
                 **pm.as_dict(), **{f"param_{k}": v for k, v in sorted(p.params.items())
                                    if isinstance(v, (int, float, str))}}

    # queries
    n_q = _maybe_count(cfg.queries)
    if n_q is None:
        pairs = parse_queries(Path(cfg.queries))
        tags = ["file"] * len(pairs)
    else:
        wl = generate_queries(g, p, n_q, cfg.stratum, cfg.seed)
        pairs, tags = wl.pairs, [t or "all" for t in wl.tags]
    q_samples: dict[str, list[float]] = {}
    answers_digest = 0
    for (s, t), tag in zip(pairs, tags):
        t0 = time.perf_counter()
        d = idx.query(s, t)
        q_samples.setdefault(tag, []).append(time.perf_counter() - t0)
        answers_digest = (answers_digest * 1000003 + (d if d < INF else 0)) % (1 << 61)

    # updates
    n_u = _maybe_count(cfg.updates)
    ups = parse_updates(Path(cfg.updates)) if n_u is None else generate_updates(idx.g, n_u, cfg.seed)
    u_samples: dict[str, list[float]] = {}
    rebuilds = 0
    for i in range(0, len(ups), cfg.batch):
        chunk = ups[i:i + cfg.batch]
        t0 = time.perf_counter()
        sig = idx.batch_update(chunk)
        dt = time.perf_counter() - t0
        if sig is REBUILD_REQUIRED:
            rebuilds += 1
        kind = chunk[0].kind if len(chunk) == 1 else f"batch{cfg.batch}"
        u_samples.setdefault(kind, []).append(dt)

    if cfg.verify == "off":
        verdict = Verdict("skipped")
    elif cfg.verify == "exhaustive" or g.n <= EXHAUSTIVE_LIMIT:
        verdict = cmd_verify(idx, idx.g, "exhaustive", cfg.seed)
    else:
        verdict = cmd_verify(idx, idx.g, cfg.sample, cfg.seed)

    st = idx.stats()
    report = BenchReport(
        config={**asdict(cfg), "descriptor": desc.as_dict()},
        partition=part_info,
        index={"strategy": idx.strategy, "entries": index_entries(idx), "bytes": index_bytes(idx),
               "stats": st},
        queries={"count": len(pairs), "by_tag": {k: len(v) for k, v in sorted(q_samples.items())},
                 "answer_digest": answers_digest},
        updates={"count": len(ups), "batch": cfg.batch, "rebuild_required": rebuilds},
        counters={"build": build_counters, "total": idx.counters.as_dict()},
        verdict=verdict.as_dict(),
        timings={"build": {"count": len(build_times), "seed": cfg.seed,
                           "median_s": round(statistics.median(build_times), 6)},
                 "queries": {k: _latency(v, cfg.seed) for k, v in sorted(q_samples.items())},
                 "updates": {k: _latency(v, cfg.seed) for k, v in sorted(u_samples.items())}},
    )
    return report, idx


__all__ = [
    "BenchReport", "DEFAULT_GRAPH", "PRESETS", "RunConfig", "VERIFY_MODES", "Verdict",
    "cmd_run", "cmd_verify", "index_entries", "load_config", "load_graph", "plant_fault",
]
