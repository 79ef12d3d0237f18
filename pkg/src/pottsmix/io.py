"""Text formats: edge lists (optionally with a dual section) and stable JSON."""

from __future__ import annotations

import json
import math
from typing import Any, Iterable

import numpy as np

from .graph import DualMap, Graph, GraphError


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n_vertices} {g.n_edges}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def format_dual_map(dmap: DualMap) -> str:
    """Primal edge list, dual edge list, then ``e e_D`` pairs."""
    pairs = "".join(f"{e} {ed}\n" for e, ed in enumerate(dmap.edge_bijection))
    return format_edge_list(dmap.primal) + format_edge_list(dmap.dual) + pairs


def _ints(lines: list[str], i: int) -> tuple[int, int]:
    parts = lines[i].split()
    if len(parts) != 2:
        raise GraphError(f"line {i + 1}: expected two integers, got {lines[i]!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphError(f"line {i + 1}: expected two integers, got {lines[i]!r}") from None


def _read_graph(lines: list[str], start: int, name: str) -> tuple[Graph, int]:
    if start >= len(lines):
        raise GraphError("missing graph header")
    n, m = _ints(lines, start)
    if start + 1 + m > len(lines):
        raise GraphError(f"expected {m} edge lines after header")
    edges = tuple(_ints(lines, start + 1 + i) for i in range(m))
    return Graph(n, edges, name), start + 1 + m


def parse_graph_file(text: str, name: str = "file") -> tuple[Graph, DualMap | None]:
    """Parse an edge list; if a dual section and bijection follow, return the DualMap too."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    g, pos = _read_graph(lines, 0, name)
    if pos == len(lines):
        return g, None
    dual, pos = _read_graph(lines, pos, name + "_dual")
    bij = [0] * g.n_edges
    seen = set()
    for i in range(g.n_edges):
        if pos + i >= len(lines):
            raise GraphError("edge bijection section is incomplete")
        e, ed = _ints(lines, pos + i)
        if not 0 <= e < g.n_edges or e in seen:
            raise GraphError(f"bad bijection line {lines[pos + i]!r}")
        seen.add(e)
        bij[e] = ed
    if pos + g.n_edges != len(lines):
        raise GraphError("trailing lines after edge bijection")
    return g, DualMap(g, dual, tuple(bij))


def read_graph_file(path: str) -> tuple[Graph, DualMap | None]:
    with open(path) as fh:
        return parse_graph_file(fh.read(), name=path)


# ----------------------------------------------------------------------------
# JSON with sorted keys and 17 significant digits


def _encode(obj: Any, out: list[str]) -> None:
    if obj is None or obj is True or obj is False:
        out.append({None: "null", True: "true", False: "false"}[obj])
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        out.append(format(x, ".17g") if math.isfinite(x) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(", ")
            _encode(str(key), out)
            out.append(": ")
            _encode(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _encode(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    out: list[str] = []
    _encode(obj, out)
    return "".join(out)


def dumps_lines(rows: Iterable[Any]) -> str:
    """A JSON array with one element per line."""
    body = ",\n  ".join(dumps(r) for r in rows)
    return f"[\n  {body}\n]\n" if body else "[]\n"
