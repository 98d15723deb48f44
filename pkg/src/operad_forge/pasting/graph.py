"""Flag graphs: flags, an involution, a partition into vertices, leg labels.

One class carries every pasting-scheme kind; `kind` says which invariants
apply:

  rooted    legs labeled 0 (root) .. n, dirs point toward the root
  cyclic    legs labeled 0 .. n, no root
  modular   cyclic plus a genus label per vertex, loops/parallel edges allowed
  directed  dirs 'in'/'out' per flag, legs ('in', j) and ('out', i)
  graph     anything else (intermediate objects)

Flags whose vertex is -1 belong to no vertex.  They only occur in pairs, as
bare wires of the exceptional graphs (the no-vertex tree, the identity wires
of a PROP).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

__all__ = [
    "GraphError", "FlagGraph", "KINDS",
    "corolla", "rooted_corolla", "directed_corolla", "identity_wires",
    "rooted_from_nested", "nested_from_rooted", "betti1", "components",
    "is_connected", "is_acyclic", "genus", "is_stable", "label_key",
]

KINDS = ("rooted", "cyclic", "modular", "directed", "graph")


class GraphError(ValueError):
    pass


def label_key(label) -> tuple:
    """Total order on heterogeneous labels."""
    if label is None:
        return (0,)
    if isinstance(label, tuple):
        return (2,) + tuple(label_key(x) for x in label)
    if isinstance(label, str):
        return (3, label)
    return (1, label)


@dataclass(frozen=True)
class FlagGraph:
    vertex_of: tuple[int, ...]
    inv: tuple[int, ...]
    labels: tuple[Hashable | None, ...]
    n_vertices: int
    kind: str = "graph"
    genus: tuple[int, ...] | None = None
    dirs: tuple[str | None, ...] | None = None

    def __post_init__(self):
        F = len(self.vertex_of)
        if len(self.inv) != F or len(self.labels) != F:
            raise GraphError("flag arrays of unequal length")
        if self.kind not in KINDS:
            raise GraphError(f"unknown kind {self.kind!r}")
        for f in range(F):
            g = self.inv[f]
            if not 0 <= g < F or self.inv[g] != f:
                raise GraphError("inv is not an involution")
            v = self.vertex_of[f]
            if not -1 <= v < self.n_vertices:
                raise GraphError("flag attached to a missing vertex")
            if v == -1:
                if g == f or self.vertex_of[g] != -1:
                    raise GraphError("vertexless flags must come in bare-wire pairs")
                if self.labels[f] is None:
                    raise GraphError("bare-wire ends must be labeled")
            elif (g == f) != (self.labels[f] is not None):
                raise GraphError("exactly the fixed points of inv carry labels")
        if self.genus is not None and len(self.genus) != self.n_vertices:
            raise GraphError("one genus label per vertex")
        if self.dirs is not None:
            if len(self.dirs) != F:
                raise GraphError("one direction per flag")
            for f in range(F):
                g = self.inv[f]
                if g != f and self.vertex_of[f] != -1 and {self.dirs[f], self.dirs[g]} != {"in", "out"}:
                    raise GraphError("edges must join an out-flag to an in-flag")

    # -- basic queries ---------------------------------------------------
    @property
    def n_flags(self) -> int:
        return len(self.vertex_of)

    def flags_at(self, v: int) -> list[int]:
        return [f for f, w in enumerate(self.vertex_of) if w == v]

    def legs(self) -> list[int]:
        """Flags carrying a label (fixed points and bare-wire ends)."""
        return [f for f in range(self.n_flags) if self.labels[f] is not None]

    def leg_by_label(self) -> dict:
        return {self.labels[f]: f for f in self.legs()}

    def edges(self) -> list[tuple[int, int]]:
        """Internal edges (both flags on vertices), as (f, inv f) with f < inv f."""
        return [(f, self.inv[f]) for f in range(self.n_flags)
                if self.inv[f] > f and self.vertex_of[f] != -1]

    def bare_wires(self) -> list[tuple[int, int]]:
        return [(f, self.inv[f]) for f in range(self.n_flags)
                if self.inv[f] > f and self.vertex_of[f] == -1]

    def in_flags(self, v: int) -> list[int]:
        return [f for f in self.flags_at(v) if self.dirs[f] == "in"]

    def out_flags(self, v: int) -> list[int]:
        return [f for f in self.flags_at(v) if self.dirs[f] == "out"]

    def biarity(self, v: int) -> tuple[int, int]:
        return (len(self.out_flags(v)), len(self.in_flags(v)))

    def valence(self, v: int) -> int:
        return sum(1 for w in self.vertex_of if w == v)

    def profile(self):
        """Arity n (rooted/cyclic), (g, n) (modular) or (m, n) (directed)."""
        legs = self.legs()
        if self.kind in ("rooted", "cyclic"):
            return len(legs) - 1
        if self.kind == "modular":
            return (genus(self), len(legs) - 1)
        if self.kind == "directed":
            outs = sum(1 for f in legs if self.labels[f][0] == "out")
            return (outs, len(legs) - outs)
        return len(legs)

    def relabel_legs(self, mapping) -> FlagGraph:
        """New graph with leg label l replaced by mapping[l] (dict or callable)."""
        get = mapping if callable(mapping) else mapping.__getitem__
        labels = tuple(None if l is None else get(l) for l in self.labels)
        return FlagGraph(self.vertex_of, self.inv, labels, self.n_vertices, self.kind, self.genus, self.dirs)

    def with_kind(self, kind: str, genus: Sequence[int] | None = None, dirs=False) -> FlagGraph:
        g = tuple(genus) if genus is not None else self.genus
        d = self.dirs if dirs is False else dirs
        return FlagGraph(self.vertex_of, self.inv, self.labels, self.n_vertices, kind, g, d)

    def permute_flags(self, perm: Sequence[int]) -> FlagGraph:
        """Relabel flag f as perm[f]."""
        F = self.n_flags
        vo = [0] * F
        inv = [0] * F
        lab = [None] * F
        dirs = [None] * F if self.dirs is not None else None
        for f in range(F):
            p = perm[f]
            vo[p] = self.vertex_of[f]
            inv[p] = perm[self.inv[f]]
            lab[p] = self.labels[f]
            if dirs is not None:
                dirs[p] = self.dirs[f]
        return FlagGraph(tuple(vo), tuple(inv), tuple(lab), self.n_vertices, self.kind,
                         self.genus, tuple(dirs) if dirs is not None else None)

    def permute_vertices(self, perm: Sequence[int]) -> FlagGraph:
        """Relabel vertex v as perm[v]."""
        vo = tuple(-1 if v == -1 else perm[v] for v in self.vertex_of)
        genus_ = None
        if self.genus is not None:
            gl = [0] * self.n_vertices
            for v in range(self.n_vertices):
                gl[perm[v]] = self.genus[v]
            genus_ = tuple(gl)
        return FlagGraph(vo, self.inv, self.labels, self.n_vertices, self.kind, genus_, self.dirs)


def betti1(g: FlagGraph) -> int:
    """|edges| - |vertices| + |components| (bare wires count as a vertexless edge component)."""
    return len(g.edges()) - g.n_vertices + _vertex_components(g)


def _vertex_components(g: FlagGraph) -> int:
    parent = list(range(g.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f, h in g.edges():
        a, b = find(g.vertex_of[f]), find(g.vertex_of[h])
        if a != b:
            parent[a] = b
    return len({find(v) for v in range(g.n_vertices)})


def components(g: FlagGraph) -> int:
    """Connected components, counting each bare wire as one."""
    return _vertex_components(g) + len(g.bare_wires())


def is_connected(g: FlagGraph) -> bool:
    return components(g) == 1


def genus(g: FlagGraph) -> int:
    """b1 plus the vertex genera."""
    return betti1(g) + (sum(g.genus) if g.genus is not None else 0)


def is_stable(g: FlagGraph) -> bool:
    gl = g.genus or (0,) * g.n_vertices
    return all(2 * (gl[v] - 1) + g.valence(v) > 0 for v in range(g.n_vertices))


def is_acyclic(g: FlagGraph) -> bool:
    """No directed cycles (for graphs with dirs)."""
    succ = {v: set() for v in range(g.n_vertices)}
    for f, h in g.edges():
        a, b = (f, h) if g.dirs[f] == "out" else (h, f)
        succ[g.vertex_of[a]].add(g.vertex_of[b])
    state = {}

    def visit(v):
        state[v] = 1
        for w in succ[v]:
            s = state.get(w)
            if s == 1 or (s is None and not visit(w)):
                return False
        state[v] = 2
        return True

    return all(state.get(v) == 2 or visit(v) for v in range(g.n_vertices))


# -- constructors ----------------------------------------------------------

def corolla(n_legs: int, kind: str = "cyclic", genus_: int = 0, labels: Sequence | None = None) -> FlagGraph:
    """One vertex with legs labeled 0..n_legs-1 (or the given labels)."""
    labels = tuple(labels) if labels is not None else tuple(range(n_legs))
    gl = (genus_,) if kind == "modular" else None
    return FlagGraph((0,) * n_legs, tuple(range(n_legs)), labels, 1, kind, gl)


def rooted_corolla(n: int) -> FlagGraph:
    return FlagGraph((0,) * (n + 1), tuple(range(n + 1)), tuple(range(n + 1)), 1, "rooted",
                     None, ("out",) + ("in",) * n)


def directed_corolla(m: int, n: int) -> FlagGraph:
    """One vertex of biarity (m, n)."""
    labels = tuple(("out", i) for i in range(1, m + 1)) + tuple(("in", j) for j in range(1, n + 1))
    F = m + n
    return FlagGraph((0,) * F, tuple(range(F)), labels, 1, "directed", None,
                     ("out",) * m + ("in",) * n)


def identity_wires(n: int, pairing: Sequence[int] | None = None) -> FlagGraph:
    """Exceptional graph: n bare wires, input j joined to output pairing[j-1] (default j)."""
    pairing = list(pairing) if pairing is not None else list(range(1, n + 1))
    vo, inv, lab = [], [], []
    for j in range(1, n + 1):
        a = len(vo)
        vo += [-1, -1]
        inv += [a + 1, a]
        lab += [("in", j), ("out", pairing[j - 1])]
    return FlagGraph(tuple(vo), tuple(inv), tuple(lab), 0, "directed", None, (None,) * (2 * n))


def rooted_from_nested(nested) -> FlagGraph:
    """Build a rooted tree from nested tuples of leaf labels: ((1, 2), 3) etc.

    A bare integer gives the exceptional tree (root 0 wired to that leaf)."""
    vo: list[int] = []
    inv: list[int] = []
    lab: list = []
    dirs: list = []
    nv = 0

    def new_flag(v, label, d):
        vo.append(v)
        inv.append(len(inv))
        lab.append(label)
        dirs.append(d)
        return len(vo) - 1

    if isinstance(nested, int):
        return FlagGraph((-1, -1), (1, 0), (0, nested), 0, "rooted", None, (None, None))

    def build(node) -> int:
        """Create the vertex for node; return its out-flag."""
        nonlocal nv
        v = nv
        nv += 1
        out = new_flag(v, None, "out")
        for child in node:
            fin = new_flag(v, None, "in")
            if isinstance(child, int):
                lab[fin] = child
            else:
                cout = build(child)
                inv[fin], inv[cout] = cout, fin
        return out

    root_out = build(nested)
    lab[root_out] = 0
    return FlagGraph(tuple(vo), tuple(inv), tuple(lab), nv, "rooted", None, tuple(dirs))


def nested_from_rooted(t: FlagGraph):
    """Inverse of rooted_from_nested, children sorted by their minimal leaf."""
    if t.n_vertices == 0:
        (a, b), = t.bare_wires()
        return t.labels[b] if t.labels[a] == 0 else t.labels[a]
    root = t.leg_by_label()[0]

    def minleaf(x):
        return x if isinstance(x, int) else min(minleaf(c) for c in x)

    def walk(out_flag):
        v = t.vertex_of[out_flag]
        kids = []
        for f in t.flags_at(v):
            if f == out_flag:
                continue
            if t.labels[f] is not None:
                kids.append(t.labels[f])
            else:
                kids.append(walk(t.inv[f]))
        return tuple(sorted(kids, key=minleaf))

    return walk(root)
