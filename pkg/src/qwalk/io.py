"""Text file formats and atomic output writing."""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .graphs import Graph

__all__ = [
    "fmt",
    "format_graph",
    "parse_graph",
    "read_graph",
    "write_graph",
    "csv_text",
    "read_series_csv",
    "atomic_write",
    "write_outputs",
    "load_json",
    "dump_json",
]


def fmt(x) -> str:
    """17 significant digits, enough to round-trip any float64."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.17g}"


def format_graph(g: Graph) -> str:
    lines = [f"# n={g.n}"]
    lines += [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# n="):
        raise ParameterError("graph file must start with '# n=<N>'")
    try:
        n = int(lines[0][4:])
        pairs = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise ParameterError(f"malformed graph file: {exc}") from None
    if any(len(p) != 2 for p in pairs):
        raise ParameterError("every edge line needs exactly two node ids")
    return Graph.from_pairs(n, pairs)


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


def write_graph(g: Graph, path) -> None:
    atomic_write(path, format_graph(g))


def csv_text(header, rows) -> str:
    out = [",".join(header)]
    out += [",".join(fmt(x) for x in row) for row in rows]
    return "\n".join(out) + "\n"


def read_series_csv(path) -> tuple[list, np.ndarray]:
    """Header and numeric body of a CSV written by this package."""
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    body = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:] if ln], dtype=float)
    return header, body.reshape(-1, len(header))


def atomic_write(path, text: str) -> None:
    """Write through a hidden temp file in the same directory, then rename."""
    path = Path(path)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    try:
        tmp.write_text(text)
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def write_outputs(files: dict, outdir) -> list:
    """Write ``{filename: text}`` into ``outdir``.

    Everything is rendered before this is called, so an interrupted computation
    leaves nothing behind; each file appears atomically.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in files:
        if Path(name).name != name:
            raise ParameterError(f"output name {name!r} must not contain directories")
    for name, text in files.items():
        atomic_write(outdir / name, text)
        written.append(outdir / name)
    return written


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}: invalid JSON ({exc})") from None
