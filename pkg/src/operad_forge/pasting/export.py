"""DOT export and the census line format."""

from __future__ import annotations

from typing import Iterable

from .canon import canonicalize
from .graph import FlagGraph

__all__ = ["to_dot", "census_line", "census"]


def _fmt(label) -> str:
    if isinstance(label, tuple):
        return "".join(str(x) for x in label)
    return str(label)


def to_dot(g: FlagGraph, name: str = "scheme") -> str:
    directed = g.dirs is not None
    arrow = "->" if directed else "--"
    lines = [f"{'digraph' if directed else 'graph'} {name} {{"]
    for v in range(g.n_vertices):
        note = f" g={g.genus[v]}" if g.genus is not None else ""
        lines.append(f'  v{v} [shape=circle,label="{v}{note}"];')
    for f in g.legs():
        lines.append(f'  l{f} [shape=plaintext,label="{_fmt(g.labels[f])}"];')
    for f in g.legs():
        v = g.vertex_of[f]
        if v == -1:
            h = g.inv[f]
            if f < h:
                a, b = (f, h)
                if directed and g.labels[f][0] == "out":
                    a, b = b, a
                lines.append(f"  l{a} {arrow} l{b};")
            continue
        if directed and g.dirs[f] == "in":
            lines.append(f"  l{f} {arrow} v{v};")
        else:
            lines.append(f"  v{v} {arrow} l{f};")
    for f, h in g.edges():
        a, b = g.vertex_of[f], g.vertex_of[h]
        if directed and g.dirs[f] == "in":
            a, b = b, a
        lines.append(f"  v{a} {arrow} v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def census_line(g: FlagGraph) -> str:
    cf = canonicalize(g)
    return f"class {cf.hex} aut {cf.aut_order}"


def census(graphs: Iterable[FlagGraph]) -> list[str]:
    return [census_line(g) for g in graphs]
