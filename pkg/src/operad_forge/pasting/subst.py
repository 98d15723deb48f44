"""Substitution of schemes into vertices (the triple multiplication) and the
hereditary closure check for directed families."""

from __future__ import annotations

from itertools import permutations
from typing import Mapping

from .graph import FlagGraph, GraphError, directed_corolla, genus
from .enumerate import DEFAULT_BIARITIES, enumerate_directed_graphs, family_predicate

__all__ = ["default_leg_map", "substitute", "substitute_with_map", "check_hereditary"]


def default_leg_map(outer: FlagGraph, v: int, inner: FlagGraph) -> dict:
    """Identify inner legs with the flags of v in flag order:
    rooted: 0 -> out flag, j -> j-th in flag; directed: ('out', i) / ('in', j) -> i-th
    out / j-th in flag; otherwise label j -> j-th flag."""
    flags = outer.flags_at(v)
    if outer.kind == "rooted":
        out = [f for f in flags if outer.dirs[f] == "out"]
        ins = [f for f in flags if outer.dirs[f] == "in"]
        m = {0: out[0]}
        m.update({j + 1: f for j, f in enumerate(ins)})
    elif outer.kind == "directed" or (outer.dirs is not None and inner.kind == "directed"):
        outs = [f for f in flags if outer.dirs[f] == "out"]
        ins = [f for f in flags if outer.dirs[f] == "in"]
        m = {("out", i + 1): f for i, f in enumerate(outs)}
        m.update({("in", j + 1): f for j, f in enumerate(ins)})
    else:
        m = {j: f for j, f in enumerate(flags)}
    inner_labels = {inner.labels[f] for f in inner.legs()}
    if set(m) != inner_labels:
        raise GraphError(f"inner legs {sorted(inner_labels, key=str)} do not match the flags of vertex {v}")
    return m


def substitute_with_map(outer: FlagGraph, assignment: Mapping[int, object]):
    """Replace each assigned vertex v of outer by an inner scheme.

    assignment[v] is an inner FlagGraph or a pair (inner, leg_map) where
    leg_map sends each inner leg label to a flag of v.  Returns the flattened
    graph and a map (v, inner vertex) or (None, outer vertex) -> result vertex."""
    inners = {}
    for v, spec in assignment.items():
        inner, lm = spec if isinstance(spec, tuple) else (spec, None)
        if lm is None:
            lm = default_leg_map(outer, v, inner)
        vflags = set(outer.flags_at(v))
        if set(lm.values()) != vflags or len(lm) != len(vflags):
            raise GraphError(f"leg map of vertex {v} is not a bijection onto its flags")
        if outer.genus is not None:
            if inner.genus is None or genus(inner) != outer.genus[v]:
                raise GraphError(f"inner genus {genus(inner) if inner.genus else 0} != genus label {outer.genus[v]}")
        if outer.dirs is not None and outer.kind in ("directed", "rooted"):
            for lab, f in lm.items():
                h = inner.leg_by_label()[lab]
                side = _leg_side(inner, h)
                if side != outer.dirs[f]:
                    raise GraphError("inner leg direction does not match the outer flag")
        inners[v] = (inner, lm)

    # arena: outer flags are ('o', f); inner flags ('i', v, h)
    links: dict[tuple, list[tuple]] = {}

    def link(a, b):
        links.setdefault(a, []).append(b)
        links.setdefault(b, []).append(a)

    real = []          # arena nodes that survive as flags of the result
    real_vertex = {}
    real_dir = {}
    vmap = {}
    nv = 0
    for w in range(outer.n_vertices):
        if w not in inners:
            vmap[(None, w)] = nv
            nv += 1
    for v in sorted(inners):
        inner, _ = inners[v]
        for w in range(inner.n_vertices):
            vmap[(v, w)] = nv
            nv += 1
    new_genus = [0] * nv if outer.genus is not None else None

    label_of = {}
    for f in range(outer.n_flags):
        node = ("o", f)
        links.setdefault(node, [])
        w = outer.vertex_of[f]
        if outer.inv[f] != f and f < outer.inv[f]:
            link(node, ("o", outer.inv[f]))
        if outer.labels[f] is not None:
            label_of[node] = outer.labels[f]
        if w != -1 and w not in inners:
            real.append(node)
            real_vertex[node] = vmap[(None, w)]
            real_dir[node] = outer.dirs[f] if outer.dirs is not None else None
    if new_genus is not None:
        for w in range(outer.n_vertices):
            if w not in inners:
                new_genus[vmap[(None, w)]] = outer.genus[w]
    for v, (inner, lm) in sorted(inners.items()):
        by_label = inner.leg_by_label()
        for h in range(inner.n_flags):
            node = ("i", v, h)
            links.setdefault(node, [])
            if inner.inv[h] != h and h < inner.inv[h]:
                link(node, ("i", v, inner.inv[h]))
            if inner.vertex_of[h] != -1:
                real.append(node)
                real_vertex[node] = vmap[(v, inner.vertex_of[h])]
                real_dir[node] = inner.dirs[h] if inner.dirs is not None else None
        for lab, f in lm.items():
            link(("i", v, by_label[lab]), ("o", f))
        if new_genus is not None:
            for w in range(inner.n_vertices):
                new_genus[vmap[(v, w)]] = inner.genus[w]

    real_set = set(real)
    index = {node: k for k, node in enumerate(real)}

    def walk(start, first):
        """Follow connectors from `start` via `first`; return (end node, dead-end label)."""
        prev, cur = start, first
        while cur not in real_set:
            nxt = [x for x in links[cur] if x != prev]
            if not nxt:
                return None, label_of.get(cur)
            if len(nxt) > 1:
                raise GraphError("malformed substitution (branching connector)")
            prev, cur = cur, nxt[0]
        return cur, None

    F = len(real)
    inv = list(range(F))
    labels: list = [None] * F
    for node in real:
        k = index[node]
        nbrs = links[node]
        if not nbrs:
            labels[k] = label_of.get(node)
            if labels[k] is None:
                raise GraphError("unlabeled dangling flag")
            continue
        end, lab = walk(node, nbrs[0])
        if end is None:
            labels[k] = lab
        else:
            inv[k] = index[end]
    # bare wires: chains of connectors between two labeled dead ends
    vo = [real_vertex[n] for n in real]
    dirs = [real_dir[n] for n in real]
    seen = set()
    for node, lab in label_of.items():
        if node in real_set or node in seen:
            continue
        nbrs = links[node]
        if len(nbrs) != 1:
            continue
        prev, cur = node, nbrs[0]
        while cur not in real_set:
            nxt = [x for x in links[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
        if cur in real_set or cur == node:
            continue
        seen.update((node, cur))
        a = len(vo)
        vo += [-1, -1]
        inv += [a + 1, a]
        labels += [lab, label_of[cur]]
        dirs += [None, None]
    has_dirs = outer.dirs is not None
    g = FlagGraph(tuple(vo), tuple(inv), tuple(labels), nv, outer.kind,
                  tuple(new_genus) if new_genus is not None else None,
                  tuple(dirs) if has_dirs else None)
    return g, vmap


def _leg_side(inner: FlagGraph, h: int) -> str:
    """Direction an inner leg presents to the outside, as seen from the vertex it replaces."""
    if inner.kind == "rooted":
        return "out" if inner.labels[h] == 0 else "in"
    return "out" if inner.labels[h][0] == "out" else "in"


def substitute(outer: FlagGraph, assignment: Mapping[int, object]) -> FlagGraph:
    return substitute_with_map(outer, assignment)[0]


def _leg_maps(outer: FlagGraph, v: int, inner: FlagGraph):
    outs = outer.out_flags(v)
    ins = outer.in_flags(v)
    for po in permutations(outs):
        for pi in permutations(ins):
            m = {("out", i + 1): f for i, f in enumerate(po)}
            m.update({("in", j + 1): f for j, f in enumerate(pi)})
            yield m


def check_hereditary(family, bound: int = 3, biarities=DEFAULT_BIARITIES, max_profile: int = 3):
    """Closure of a directed family under substitution, sampled up to `bound`
    vertices for both the outer and the inner graphs.

    Returns (True, None) or (False, counterexample dict)."""
    pred = family_predicate(family)
    for p, q in biarities:
        c = directed_corolla(p, q)
        if not pred(c):
            return False, {"reason": "corolla missing", "biarity": (p, q), "graph": c}
    inner_by_biarity = {}
    for p, q in set(biarities):
        gs = [g for g in enumerate_directed_graphs(p, q, bound, "all", biarities) if g.n_vertices >= 1 and pred(g)]
        inner_by_biarity[(p, q)] = sorted(gs, key=lambda g: -g.n_vertices)
    outers = []
    for m in range(1, max_profile + 1):
        for n in range(1, max_profile + 1):
            outers += [g for g in enumerate_directed_graphs(m, n, bound, "all", biarities)
                       if g.n_vertices >= 1 and pred(g)]
    outers.sort(key=lambda g: g.n_vertices)
    for G in outers:
        verts = range(G.n_vertices)
        # all vertices at once, largest inner graphs first
        assignment = {v: inner_by_biarity[G.biarity(v)][0] for v in verts}
        H = substitute(G, assignment)
        if not pred(H):
            return False, {"reason": "not closed", "outer": G, "assignment": assignment, "result": H}
        # then every single-vertex substitution with every leg identification
        for v in verts:
            for inner in inner_by_biarity[G.biarity(v)]:
                for lm in _leg_maps(G, v, inner):
                    H = substitute(G, {v: (inner, lm)})
                    if not pred(H):
                        return False, {"reason": "not closed", "outer": G,
                                       "assignment": {v: inner}, "result": H}
    return True, None
