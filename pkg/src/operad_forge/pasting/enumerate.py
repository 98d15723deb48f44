"""Enumeration of pasting schemes, one representative per isomorphism class."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator, Sequence

from .canon import canonicalize
from .graph import (FlagGraph, GraphError, betti1, is_connected,
                    rooted_from_nested)

__all__ = [
    "set_partitions", "nested_trees", "enumerate_rooted_trees", "enumerate_cyclic_trees",
    "enumerate_stable_graphs", "enumerate_directed_graphs", "FAMILIES",
    "family_predicate", "is_half_graph", "MayTree", "may_levels", "is_may_tree",
    "enumerate_may_trees", "DEFAULT_BIARITIES",
]

log = logging.getLogger(__name__)

DEFAULT_BIARITIES = ((1, 2), (2, 1))


def set_partitions(items: Sequence, k: int) -> Iterator[list[list]]:
    """Partitions of items into exactly k nonempty unordered blocks,
    blocks listed by their first element."""
    items = list(items)
    if k == 0:
        if not items:
            yield []
        return
    if len(items) < k:
        return
    first, rest = items[0], items[1:]
    # first alone
    for p in set_partitions(rest, k - 1):
        yield [[first]] + p
    # first joins a block of a partition of rest into k blocks
    for p in set_partitions(rest, k):
        for i in range(k):
            q = [list(b) for b in p]
            q[i] = [first] + q[i]
            yield sorted(q, key=lambda b: b[0])


def _minleaf(x):
    return x if isinstance(x, int) else min(_minleaf(c) for c in x)


def nested_trees(labels: Sequence[int], arities: Iterable[int], max_vertices: int | None = None):
    """All leaf-labeled rooted trees on `labels` as (nested, vertex_count),
    vertices having an arity in `arities` (no 0-ary vertices)."""
    arities = sorted(set(arities))
    if 0 in arities:
        raise GraphError("0-ary vertices make the tree set non-rigid; not supported")
    if 1 in arities and max_vertices is None:
        raise GraphError("unary vertices need a vertex bound")
    memo = {}

    def gen(S: tuple, budget):
        key = (S, budget)
        if key in memo:
            return memo[key]
        out = []
        if len(S) == 1:
            out.append((S[0], 0))
        if budget is None or budget >= 1:
            sub = None if budget is None else budget - 1
            for k in arities:
                if k > len(S):
                    continue
                for blocks in set_partitions(S, k):
                    out.extend(_combine([gen(tuple(b), sub) for b in blocks], sub))
        memo[key] = out
        return out

    def _combine(options, budget):
        # choose one subtree per block, total vertices <= budget, then add the vertex
        res = []

        def rec(i, acc, used):
            if i == len(options):
                res.append((tuple(sorted(acc, key=_minleaf)), used + 1))
                return
            for t, c in options[i]:
                if budget is not None and used + c > budget:
                    continue
                rec(i + 1, acc + [t], used + c)

        rec(0, [], 0)
        return res

    return gen(tuple(sorted(labels)), max_vertices)


def _tree_sort_key(t: FlagGraph):
    return (t.n_vertices, canonicalize(t).data)


def enumerate_rooted_trees(n: int, min_arity: int = 2, allow_exceptional: bool = False,
                           max_vertices: int | None = None, arities: Iterable[int] | None = None) -> list[FlagGraph]:
    if n < 0:
        raise GraphError("negative arity")
    if n == 0:
        return []
    if arities is None:
        if min_arity < 1:
            raise GraphError("min_arity must be at least 1")
        hi = n if max_vertices is None else n + max_vertices
        arities = range(min_arity, max(hi, min_arity) + 1)
    trees = []
    for nested, nv in nested_trees(range(1, n + 1), arities, max_vertices):
        if nv == 0 and not allow_exceptional:
            continue
        trees.append(rooted_from_nested(nested))
    return sorted(trees, key=_tree_sort_key)


def enumerate_cyclic_trees(n: int, min_valence: int = 3, max_vertices: int | None = None) -> list[FlagGraph]:
    """Legs 0..n; rooting at leg 0 identifies these with rooted trees of min arity min_valence-1."""
    if n < 1:
        return []
    rooted = enumerate_rooted_trees(n, max(1, min_valence - 1), False, max_vertices)
    return [t.with_kind("cyclic", dirs=None) for t in rooted]


# -- stable modular graphs ------------------------------------------------------

def _modular_corolla(g: int, n: int) -> FlagGraph:
    L = n + 1
    return FlagGraph((0,) * L, tuple(range(L)), tuple(range(L)), 1, "modular", (g,))


def _expansions(G: FlagGraph) -> Iterator[FlagGraph]:
    """Graphs H with one more edge such that contracting that edge gives G."""
    F = G.n_flags
    for v in range(G.n_vertices):
        gv = G.genus[v]
        fl = G.flags_at(v)
        if gv >= 1:  # new loop at v
            yield FlagGraph(G.vertex_of + (v, v), G.inv + (F + 1, F), G.labels + (None, None),
                            G.n_vertices, "modular", G.genus[:v] + (gv - 1,) + G.genus[v + 1:])
        # split v into v (flags A + x) and a new vertex w (flags B + y)
        w = G.n_vertices
        for r in range(len(fl) + 1):
            for A in combinations(fl, r):
                A = set(A)
                B = [f for f in fl if f not in A]
                for a in range(gv + 1):
                    b = gv - a
                    if 2 * (a - 1) + len(A) + 1 <= 0 or 2 * (b - 1) + len(B) + 1 <= 0:
                        continue
                    vo = list(G.vertex_of)
                    for f in B:
                        vo[f] = w
                    vo += [v, w]
                    gl = list(G.genus)
                    gl[v] = a
                    gl.append(b)
                    yield FlagGraph(tuple(vo), G.inv + (F + 1, F), G.labels + (None, None),
                                    G.n_vertices + 1, "modular", tuple(gl))


def enumerate_stable_graphs(g: int, n: int, simply_connected: bool = False) -> list[FlagGraph]:
    """Stable connected genus-g graphs with legs 0..n (Graphcat(g, n))."""
    if 2 * g + n - 1 <= 0:
        log.warning("no stable graphs: 2g+n-1 = %d <= 0", 2 * g + n - 1)
        return []
    level = {canonicalize(_modular_corolla(g, n)).graph}
    found = set(level)
    while level:
        nxt = set()
        for G in level:
            for H in _expansions(G):
                c = canonicalize(H).graph
                if c not in found:
                    found.add(c)
                    nxt.add(c)
        level = nxt
    out = [G for G in found if not simply_connected or betti1(G) == 0]
    return sorted(out, key=lambda G: (len(G.edges()), canonicalize(G).data))


# -- directed graphs ------------------------------------------------------------

def is_half_graph(g: FlagGraph) -> bool:
    if not is_connected(g) or betti1(g) != 0:
        raise GraphError("half-graph test needs a connected simply connected graph")
    for f, h in g.edges():
        a, b = (f, h) if g.dirs[f] == "out" else (h, f)
        u, v = g.vertex_of[a], g.vertex_of[b]
        if len(g.out_flags(u)) != 1 and len(g.in_flags(v)) != 1:
            return False
    return True


def _is_half(g: FlagGraph) -> bool:
    return is_connected(g) and betti1(g) == 0 and is_half_graph(g)


FAMILIES: dict[str, Callable[[FlagGraph], bool]] = {
    "all": lambda g: True,
    "connected": is_connected,
    "connected_simply_connected": lambda g: is_connected(g) and betti1(g) == 0,
    "half": _is_half,
}
FAMILY_ALIASES = {"prop": "all", "properad": "connected", "dioperad": "connected_simply_connected",
                  "halfprop": "half", "simply_connected": "connected_simply_connected"}


def family_predicate(family) -> Callable[[FlagGraph], bool]:
    if callable(family):
        return family
    name = FAMILY_ALIASES.get(family, family)
    if name not in FAMILIES:
        raise GraphError(f"unknown family {family!r}")
    return FAMILIES[name]


class _Partial:
    """A directed graph under construction; may hold lone input ends."""
    __slots__ = ("vertex_of", "inv", "labels", "n_vertices", "dirs")

    def __init__(self, vo, inv, lab, dirs, nv):
        self.vertex_of = tuple(vo)
        self.inv = tuple(inv)
        self.labels = tuple(lab)
        self.dirs = tuple(dirs)
        self.n_vertices = nv

    def key(self) -> bytes:
        """Isomorphism key; lone input ends get pseudo vertices so the
        canonicalizer sees a well-formed graph."""
        vo = list(self.vertex_of)
        dirs = list(self.dirs)
        lab = list(self.labels)
        nv = self.n_vertices
        for f, v in enumerate(vo):
            if v == -1:
                vo[f] = nv
                dirs[f] = "in"
                lab[f] = ("lone",) + tuple(lab[f])
                nv += 1
        return canonicalize(FlagGraph(tuple(vo), self.inv, tuple(lab), nv, "graph", None, tuple(dirs))).data


def _attach(G: _Partial, opens: list[int], consumed: Sequence[int], p: int):
    """Add a vertex fed by the open flags `consumed`, with p new open outputs."""
    vo = list(G.vertex_of)
    inv = list(G.inv)
    lab = list(G.labels)
    dirs = list(G.dirs)
    v = G.n_vertices
    for f in consumed:
        if vo[f] == -1:
            # an untouched input end becomes the vertex's input leg
            vo[f] = v
            dirs[f] = "in"
        else:
            g = len(vo)
            vo.append(v)
            inv.append(f)
            inv[f] = g
            lab.append(None)
            lab[f] = None
            dirs.append("in")
    new_opens = [f for f in opens if f not in consumed]
    for _ in range(p):
        g = len(vo)
        vo.append(v)
        inv.append(g)
        lab.append(("open",))
        dirs.append("out")
        new_opens.append(g)
    return _Partial(vo, inv, lab, dirs, v + 1), new_opens


def _finish(G: _Partial, opens: list[int], outs: Sequence[int]) -> FlagGraph:
    """Label open flag opens[k] as output outs[k]; untouched input ends become bare wires."""
    vo = list(G.vertex_of)
    inv = list(G.inv)
    lab = list(G.labels)
    dirs = list(G.dirs)
    for f, j in zip(opens, outs):
        if vo[f] == -1:
            g = len(vo)
            vo.append(-1)
            inv.append(f)
            inv[f] = g
            lab.append(("out", j))
            dirs.append(None)
        else:
            lab[f] = ("out", j)
    return FlagGraph(tuple(vo), tuple(inv), tuple(lab), G.n_vertices, "directed", None, tuple(dirs))


def enumerate_directed_graphs(m: int, n: int, max_vertices: int, family="all",
                              biarities: Sequence[tuple[int, int]] = DEFAULT_BIARITIES) -> list[FlagGraph]:
    """Directed acyclic graphs with m outputs, n inputs and at most max_vertices
    vertices of the given biarities (out, in), satisfying `family`.

    Every such graph arises by attaching vertices in a topological order on top
    of the n input wires; partial graphs are deduplicated up to isomorphism."""
    pred = family_predicate(family)
    start = _Partial([-1] * n, range(n), [("in", j) for j in range(1, n + 1)], [None] * n, 0)
    frontier = [(start, list(range(n)))]
    results = {}
    for depth in range(max_vertices + 1):
        for G, opens in frontier:
            if len(opens) != m:
                continue
            for outs in permutations(range(1, m + 1)):
                H = _finish(G, opens, outs)
                if pred(H):
                    results.setdefault(canonicalize(H).graph, None)
        if depth == max_vertices:
            break
        nxt = {}
        for G, opens in frontier:
            for p, q in biarities:
                if q > len(opens):
                    continue
                for consumed in combinations(opens, q):
                    H, new_opens = _attach(G, opens, consumed, p)
                    nxt.setdefault(H.key(), (H, new_opens))
        frontier = list(nxt.values())
    return sorted(results, key=lambda G: (G.n_vertices, canonicalize(G).data))


# -- May trees ------------------------------------------------------------------

@dataclass(frozen=True)
class MayTree:
    tree: FlagGraph
    levels: tuple[int, ...]   # per vertex; the root has the top level


def may_levels(t: FlagGraph) -> tuple[int, ...] | None:
    """Levels of a tree that can be built from corollas by simultaneous
    composition alone: every vertex has only leaves or only vertices above it.
    The root sits on the top level and each vertex one level below its parent,
    so every maximal path runs through consecutive levels.  None if some vertex
    mixes leaves with subtrees (that would need a unit)."""
    if t.n_vertices == 0:
        return ()
    depth = [0] * t.n_vertices
    root = t.leg_by_label()[0]
    stack = [(root, 0)]
    while stack:
        out_flag, d = stack.pop()
        v = t.vertex_of[out_flag]
        depth[v] = d
        kinds = set()
        for f in t.flags_at(v):
            if f == out_flag:
                continue
            if t.labels[f] is not None:
                kinds.add("leaf")
            else:
                kinds.add("vertex")
                stack.append((t.inv[f], d + 1))
        if len(kinds) > 1:
            return None
    top = max(depth) + 1
    return tuple(top - d for d in depth)


def is_may_tree(t: FlagGraph) -> bool:
    return may_levels(t) is not None


def enumerate_may_trees(n: int, min_arity: int = 2) -> list[MayTree]:
    out = []
    for t in enumerate_rooted_trees(n, min_arity):
        lv = may_levels(t)
        if lv is not None:
            out.append(MayTree(t, lv))
    return out
