"""Command-line front end (``pspindex <command> ...``)."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from .bench import (DEFAULT_GRAPH, EXHAUSTIVE_LIMIT, VERIFY_MODES, RunConfig, cmd_run,
                    cmd_verify, load_config, load_graph, plant_fault)
from .errors import PSPError
from .graph import INF, generate_updates
from .io import FORMATS, parse_queries, parse_updates
from .partition import ingest_partition_file, partition_metrics, write_partition
from .presets import build_index, make_partition
from .serialize import load_index, save_index
from .strategy import REBUILD_REQUIRED, STRATEGIES
from .workload import STRATA, generate_queries

log = logging.getLogger("pspindex")


def _common(p: argparse.ArgumentParser) -> None:
    # defaults are None so that a config file value is only overridden when a flag is given
    p.add_argument("--config", help="flat TOML file whose keys mirror these flags")
    p.add_argument("--graph", help=f"graph file, grid:RxC[:seed] or random:N[:seed] "
                                   f"(default {DEFAULT_GRAPH})")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--coords", help="DIMACS .co coordinate file")
    p.add_argument("--index", help="preset name (N-CH-P, P-TD-P, P-PT-CP, N-PC-CP, N-TS-HP) "
                                   "or custom")
    p.add_argument("--strategy", choices=STRATEGIES)
    p.add_argument("--overlay-engine", dest="overlay_engine")
    p.add_argument("--partition-engine", dest="partition_engine")
    p.add_argument("--structure", choices=("planar", "core-periphery", "hierarchical"))
    p.add_argument("--k", type=int)
    p.add_argument("--bandwidth", type=int)
    p.add_argument("--fanout", type=int)
    p.add_argument("--leaf", type=int)
    p.add_argument("--prune", action="store_true", default=None)
    p.add_argument("--partition-file", dest="partition_file")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("-v", "--verbose", action="store_true")


def _workload(p: argparse.ArgumentParser) -> None:
    p.add_argument("--queries", help="query count or query file")
    p.add_argument("--stratum", choices=STRATA)
    p.add_argument("--updates", help="update count or update file")
    p.add_argument("--batch", type=int)
    p.add_argument("--verify", choices=VERIFY_MODES)
    p.add_argument("--sample", type=int)
    p.add_argument("--report", help="write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pspindex",
                                 description="Partitioned shortest-path indexes on road networks")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition a graph and print metrics")
    _common(p)
    p.add_argument("--out", help="write the partition file (one id per line)")

    p = sub.add_parser("build", help="build an index and save it")
    _common(p)
    p.add_argument("--out", default="index.psp")

    p = sub.add_parser("query", help="answer queries")
    _common(p)
    p.add_argument("--index-file", dest="index_file")
    p.add_argument("--queries", help="query count or query file")
    p.add_argument("--stratum", choices=STRATA)
    p.add_argument("--pair", nargs=2, type=int, action="append", metavar=("S", "T"))

    p = sub.add_parser("update", help="apply updates to an index")
    _common(p)
    p.add_argument("--index-file", dest="index_file")
    p.add_argument("--updates", help="update count or update file")
    p.add_argument("--batch", type=int)
    p.add_argument("--out", help="save the updated index")

    p = sub.add_parser("bench", help="full pipeline with a metric report")
    _common(p)
    _workload(p)
    p.add_argument("--repeat", type=int, help="build repetitions for t_c (default 5)")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("verify", help="check an index against Dijkstra")
    _common(p)
    p.add_argument("--index-file", dest="index_file")
    p.add_argument("--verify", choices=VERIFY_MODES)
    p.add_argument("--sample", type=int)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return ap


def _config(args: argparse.Namespace) -> RunConfig:
    keys = ("graph", "format", "coords", "index", "strategy", "overlay_engine", "partition_engine",
            "structure", "k", "bandwidth", "fanout", "leaf", "prune", "partition_file", "seed",
            "threads", "queries", "stratum", "updates", "batch", "verify", "sample", "report",
            "repeat")
    return load_config(args.config, {k: getattr(args, k, None) for k in keys})


def _index(args, cfg: RunConfig):
    if getattr(args, "index_file", None):
        return load_index(args.index_file)
    g = load_graph(cfg.graph, cfg.format, cfg.coords)
    part = None
    if cfg.partition_file:
        with open(cfg.partition_file) as fh:
            part = ingest_partition_file(g, fh)
    return build_index(g, cfg.descriptor(), cfg.seed, partition=part, threads=cfg.threads)


def _run_partition(args, cfg: RunConfig) -> int:
    g = load_graph(cfg.graph, cfg.format, cfg.coords)
    p = make_partition(g, cfg.descriptor(), cfg.seed)
    if args.out:
        with open(args.out, "w") as fh:
            write_partition(p, fh)
    out = {"n": g.n, "m": g.m, "k": p.k, "structure": p.structure,
           **partition_metrics(g, p).as_dict()}
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def _run_build(args, cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    idx = _index(args, cfg)
    dt = time.perf_counter() - t0
    size = save_index(idx, args.out)
    print(json.dumps({"index": cfg.descriptor().name, "out": args.out, "bytes": size,
                      "build_s": round(dt, 6), "stats": idx.stats(),
                      "counters": idx.counters.as_dict()}, indent=2, sort_keys=True))
    return 0


def _fmt(d: int) -> str:
    return "inf" if d >= INF else str(d)


def _run_query(args, cfg: RunConfig) -> int:
    idx = _index(args, cfg)
    if args.pair:
        pairs = [tuple(x) for x in args.pair]
    elif cfg.queries.isdigit():
        pairs = generate_queries(idx.g, idx.partition, int(cfg.queries), cfg.stratum, cfg.seed).pairs
    else:
        pairs = parse_queries(Path(cfg.queries))
    for s, t in pairs:
        print(s, t, _fmt(idx.query(s, t)))
    return 0


def _run_update(args, cfg: RunConfig) -> int:
    idx = _index(args, cfg)
    if cfg.updates.isdigit():
        ups = generate_updates(idx.g, int(cfg.updates), cfg.seed)
    else:
        ups = parse_updates(Path(cfg.updates))
    rebuild = 0
    for i in range(0, len(ups), cfg.batch):
        if idx.batch_update(ups[i:i + cfg.batch]) is REBUILD_REQUIRED:
            rebuild += 1
    if args.out:
        save_index(idx, args.out)
    print(json.dumps({"updates": len(ups), "batch": cfg.batch, "rebuild_required": rebuild,
                      "counters": idx.counters.as_dict()}, indent=2, sort_keys=True))
    return 3 if rebuild else 0


def _run_verify(args, cfg: RunConfig) -> int:
    idx = _index(args, cfg)
    if args.inject_fault:
        plant_fault(idx)
    if cfg.verify == "off":
        print(json.dumps({"status": "skipped", "checked": 0, "failures": []}))
        return 0
    n = idx.g.n
    sample = "exhaustive" if cfg.verify == "exhaustive" or n <= EXHAUSTIVE_LIMIT else cfg.sample
    v = cmd_verify(idx, idx.g, sample, cfg.seed)
    print(json.dumps(v.as_dict(), sort_keys=True))
    return 1 if v.status == "failed" else 0


def _run_bench(args, cfg: RunConfig) -> int:
    report, _ = cmd_run(cfg, inject_fault=args.inject_fault)
    print(report.table())
    text = report.to_json()
    if cfg.report:
        Path(cfg.report).write_text(text + "\n")
    else:
        print(text)
    return 1 if report.verdict["status"] == "failed" else 0


COMMANDS = {"partition": _run_partition, "build": _run_build, "query": _run_query,
            "update": _run_update, "verify": _run_verify, "bench": _run_bench}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (PSPError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
