"""Readers and writers for graph, coordinate, update and query files.

Supported graph formats:

``dimacs-gr``
    ``c`` comment lines, one ``p sp n m`` header, ``a u v w`` arcs with
    1-based ids.
``edge-list``
    Header ``n m`` followed by ``u v w`` lines with 0-based ids. ``#`` starts
    a comment.
"""

from __future__ import annotations

import io
import logging
import os
from typing import IO, Iterable, Union

from .errors import ParseError, VertexRangeError
from .graph import INF, UPDATE_KINDS, VERTEX_INSERT, Graph, WeightUpdate

log = logging.getLogger(__name__)

Source = Union[bytes, str, os.PathLike, IO[bytes], IO[str]]
FORMATS = ("dimacs-gr", "edge-list")


def _lines(source: Source) -> Iterable[str]:
    if isinstance(source, bytes):
        yield from io.StringIO(source.decode())
        return
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            for raw in fh:
                yield raw.decode()
        return
    for raw in source:
        yield raw.decode() if isinstance(raw, bytes) else raw


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected integer, got {tok!r}", lineno) from None


def guess_format(path: str) -> str:
    return "dimacs-gr" if str(path).endswith(".gr") else "edge-list"


def parse_graph(source: Source, format: str = "dimacs-gr") -> Graph:
    if format not in FORMATS:
        raise ParseError(f"unknown graph format {format!r}")
    dimacs = format == "dimacs-gr"
    g: Graph | None = None
    declared = arcs = 0
    for lineno, line in enumerate(_lines(source), 1):
        tok = line.split()
        if not tok or tok[0] in ("c", "#") or tok[0].startswith("#"):
            continue
        if g is None:
            if dimacs:
                if tok[0] != "p" or len(tok) != 4 or tok[1] != "sp":
                    raise ParseError("expected header 'p sp n m'", lineno)
                n, declared = _int(tok[2], lineno), _int(tok[3], lineno)
            else:
                if len(tok) != 2:
                    raise ParseError("expected header 'n m'", lineno)
                n, declared = _int(tok[0], lineno), _int(tok[1], lineno)
            if n < 0 or declared < 0:
                raise ParseError("negative size in header", lineno)
            g = Graph(n)
            continue
        if dimacs:
            if tok[0] != "a" or len(tok) != 4:
                raise ParseError(f"malformed arc line {line.strip()!r}", lineno)
            u, v, w = (_int(t, lineno) for t in tok[1:])
            u -= 1
            v -= 1
        else:
            if len(tok) != 3:
                raise ParseError(f"malformed edge line {line.strip()!r}", lineno)
            u, v, w = (_int(t, lineno) for t in tok)
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise VertexRangeError(f"line {lineno}: vertex id out of range for n={g.n}")
        if w < 0:
            raise ParseError("negative weight", lineno)
        arcs += 1
        g.add_edge(u, v, w)
    if g is None:
        raise ParseError("missing header", None)
    if arcs != declared:
        log.warning("header declares %d arcs/edges but %d were read", declared, arcs)
    return g


def write_graph(g: Graph, out: IO[str], format: str = "dimacs-gr") -> None:
    """Serialize ``g``; dimacs output lists each edge as two arcs."""
    if format == "dimacs-gr":
        out.write(f"p sp {g.n} {2 * g.m}\n")
        for u, v, w in g.edges():
            out.write(f"a {u + 1} {v + 1} {w}\na {v + 1} {u + 1} {w}\n")
    elif format == "edge-list":
        out.write(f"{g.n} {g.m}\n")
        for u, v, w in g.edges():
            out.write(f"{u} {v} {w}\n")
    else:
        raise ParseError(f"unknown graph format {format!r}")


def graph_to_bytes(g: Graph, format: str = "dimacs-gr") -> bytes:
    buf = io.StringIO()
    write_graph(g, buf, format)
    return buf.getvalue().encode()


def read_coordinates(source: Source, g: Graph) -> None:
    """Attach DIMACS ``.co`` coordinates (``v id x y``) to ``g`` in place."""
    coords: list[tuple[int, int] | None] = [None] * g.n
    for lineno, line in enumerate(_lines(source), 1):
        tok = line.split()
        if not tok or tok[0] != "v":
            continue
        if len(tok) != 4:
            raise ParseError("malformed coordinate line", lineno)
        v = _int(tok[1], lineno) - 1
        if not 0 <= v < g.n:
            raise VertexRangeError(f"line {lineno}: vertex {v + 1} out of range")
        coords[v] = (_int(tok[2], lineno), _int(tok[3], lineno))
    if any(c is None for c in coords):
        raise ParseError("coordinate file does not cover every vertex")
    g.coords = coords  # type: ignore[assignment]


def parse_updates(source: Source) -> list[WeightUpdate]:
    """``kind u v new_weight`` per line; ``inf`` is accepted as a weight.

    ``vertex-delete u`` needs only the vertex; ``vertex-insert u x1:w1 x2:w2 ...``
    lists the edges to restore.
    """
    out = []
    for lineno, line in enumerate(_lines(source), 1):
        tok = line.split()
        if not tok or tok[0].startswith("#"):
            continue
        kind = tok[0]
        if kind not in UPDATE_KINDS:
            raise ParseError(f"unknown update kind {kind!r}", lineno)
        if kind == "vertex-delete":
            out.append(WeightUpdate(kind, _int(tok[1], lineno)))
            continue
        if kind == VERTEX_INSERT:
            edges = []
            for t in tok[2:]:
                x, _, w = t.partition(":")
                edges.append((_int(x, lineno), _int(w, lineno)))
            out.append(WeightUpdate(kind, _int(tok[1], lineno), edges=tuple(edges)))
            continue
        if len(tok) not in (3, 4):
            raise ParseError("expected 'kind u v new_weight'", lineno)
        w = INF if len(tok) == 3 or tok[3].lower() == "inf" else _int(tok[3], lineno)
        out.append(WeightUpdate(kind, _int(tok[1], lineno), _int(tok[2], lineno), w))
    return out


def format_update(u: WeightUpdate) -> str:
    if u.kind == "vertex-delete":
        return f"{u.kind} {u.u}"
    if u.kind == VERTEX_INSERT:
        return " ".join([u.kind, str(u.u)] + [f"{x}:{w}" for x, w in u.edges])
    w = "inf" if u.new_weight >= INF else str(u.new_weight)
    return f"{u.kind} {u.u} {u.v} {w}"


def parse_queries(source: Source) -> list[tuple[int, int]]:
    out = []
    for lineno, line in enumerate(_lines(source), 1):
        tok = line.split()
        if not tok or tok[0].startswith("#"):
            continue
        if len(tok) != 2:
            raise ParseError("expected 's t'", lineno)
        out.append((_int(tok[0], lineno), _int(tok[1], lineno)))
    return out
