"""Canonical labeling of flag graphs.

Vertices are colored by local invariants (genus, legs, flag directions) and
the coloring is refined until stable.  Ties are broken by individualizing
each vertex of the first non-singleton cell in turn and refining again.
Every discrete leaf of that search yields a vertex ordering; the ordering
with the smallest encoding wins, and all orderings reaching the minimum give
the vertex automorphisms.  Parallel edges, loop flips and equally labeled
legs add the flag-level automorphisms that fix every vertex.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from itertools import permutations, product

from .graph import FlagGraph, label_key

__all__ = ["CanonicalForm", "canonicalize", "isomorphic", "automorphisms"]


@dataclass(frozen=True)
class CanonicalForm:
    graph: FlagGraph                 # the canonical representative
    flag_map: tuple[int, ...]        # input flag -> flag of `graph`
    vertex_map: tuple[int, ...]      # input vertex -> vertex of `graph`
    automorphisms: tuple[tuple[int, ...], ...]   # flag bijections of `graph`
    data: bytes

    @property
    def hex(self) -> str:
        return hashlib.sha256(self.data).hexdigest()[:16]

    @property
    def aut_order(self) -> int:
        return len(self.automorphisms)


def _dk(g: FlagGraph, f: int) -> str:
    return "" if g.dirs is None or g.dirs[f] is None else g.dirs[f]


def _initial_colors(g: FlagGraph, flags_at) -> list[int]:
    sigs = []
    for v in range(g.n_vertices):
        legs = []
        inner = []
        for f in flags_at[v]:
            if g.labels[f] is not None:
                legs.append((label_key(g.labels[f]), _dk(g, f)))
            elif g.vertex_of[g.inv[f]] == v:
                inner.append(("loop", _dk(g, f)))
            else:
                inner.append(("edge", _dk(g, f)))
        gen = g.genus[v] if g.genus is not None else 0
        sigs.append((gen, tuple(sorted(legs)), tuple(sorted(inner))))
    return _rank(sigs)


def _rank(sigs) -> list[int]:
    order = {s: i for i, s in enumerate(sorted(set(sigs)))}
    return [order[s] for s in sigs]


def _refine(g: FlagGraph, flags_at, colors: list[int]) -> list[int]:
    ncls = len(set(colors))
    while True:
        sigs = []
        for v in range(g.n_vertices):
            nb = []
            for f in flags_at[v]:
                h = g.inv[f]
                if h != f:
                    nb.append((_dk(g, f), colors[g.vertex_of[h]], _dk(g, h)))
            sigs.append((colors[v], tuple(sorted(nb))))
        new = _rank(sigs)
        k = len(set(new))
        if k == ncls:
            return new
        colors, ncls = new, k


def _leaves(g: FlagGraph, flags_at, colors: list[int]):
    n = g.n_vertices
    if len(set(colors)) == n:
        yield colors
        return
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    target = min((c for c, vs in cells.items() if len(vs) > 1), key=lambda c: (len(cells[c]), c))
    for v in cells[target]:
        split = _rank([(c, 0 if u == v else 1) for u, c in enumerate(colors)])
        yield from _leaves(g, flags_at, _refine(g, flags_at, split))


def _records(g: FlagGraph, pos):
    """Sorted records describing g under the vertex ordering pos, plus for each
    record the list of input flag tuples realizing it."""
    edges: dict[tuple, list[tuple[int, int]]] = {}
    for f, h in g.edges():
        a = (pos[g.vertex_of[f]], _dk(g, f))
        b = (pos[g.vertex_of[h]], _dk(g, h))
        if g.dirs is not None and g.dirs[f] == "in":
            a, b, f, h = b, a, h, f
        elif g.dirs is None and b < a:
            a, b, f, h = b, a, h, f
        edges.setdefault((a, b), []).append((f, h))
    legs: dict[tuple, list[tuple[int]]] = {}
    for f in range(g.n_flags):
        if g.labels[f] is not None and g.vertex_of[f] != -1:
            legs.setdefault((label_key(g.labels[f]), pos[g.vertex_of[f]], _dk(g, f)), []).append((f,))
    wires: dict[tuple, list[tuple[int, int]]] = {}
    for f, h in g.bare_wires():
        ka, kb = label_key(g.labels[f]), label_key(g.labels[h])
        if kb < ka:
            f, h, ka, kb = h, f, kb, ka
        wires.setdefault((ka, kb), []).append((f, h))
    return edges, legs, wires


def _encode(g: FlagGraph, pos, order):
    edges, legs, wires = _records(g, pos)
    gens = tuple(g.genus[v] for v in order) if g.genus is not None else ()
    enc = (g.kind, g.n_vertices, gens,
           tuple((k, len(v)) for k, v in sorted(edges.items())),
           tuple((k, len(v)) for k, v in sorted(legs.items())),
           tuple((k, len(v)) for k, v in sorted(wires.items())))
    return enc, (edges, legs, wires)


def _build(g: FlagGraph, order, recs):
    """Canonical graph and the flag map for one ordering."""
    edges, legs, wires = recs
    F = g.n_flags
    fmap = [0] * F
    vo, inv, lab, dirs = [], [], [], []
    has_dirs = g.dirs is not None
    groups: list[list[tuple[int, ...]]] = []   # canonical flag tuples of identical records
    loops: list[tuple[int, int]] = []
    for key in sorted(edges):
        (pa, da), (pb, db) = key
        grp = []
        for f, h in edges[key]:
            a = len(vo)
            vo += [pa, pb]
            inv += [a + 1, a]
            lab += [None, None]
            dirs += [da or None, db or None]
            fmap[f], fmap[h] = a, a + 1
            grp.append((a, a + 1))
            if pa == pb and not has_dirs:
                loops.append((a, a + 1))
        groups.append(grp)
    for key in sorted(legs):
        grp = []
        for (f,) in legs[key]:
            a = len(vo)
            vo.append(key[1])
            inv.append(a)
            lab.append(g.labels[f])
            dirs.append(key[2] or None)
            fmap[f] = a
            grp.append((a,))
        groups.append(grp)
    for key in sorted(wires):
        grp = []
        for f, h in wires[key]:
            a = len(vo)
            vo += [-1, -1]
            inv += [a + 1, a]
            lab += [g.labels[f], g.labels[h]]
            dirs += [None, None]
            fmap[f], fmap[h] = a, a + 1
            grp.append((a, a + 1))
        groups.append(grp)
    genus = tuple(g.genus[v] for v in order) if g.genus is not None else None
    canon = FlagGraph(tuple(vo), tuple(inv), tuple(lab), g.n_vertices, g.kind, genus,
                      tuple(dirs) if has_dirs else None)
    return canon, fmap, groups, loops


def _local_group(F: int, groups, loops):
    """Flag permutations fixing every vertex: shuffles of identical records and loop flips."""
    factors = []
    for grp in groups:
        if len(grp) > 1:
            opts = []
            for p in permutations(range(len(grp))):
                opts.append([(src, grp[p[i]]) for i, src in enumerate(grp)])
            factors.append(opts)
    for a, b in loops:
        factors.append([[((a, b), (a, b))], [((a, b), (b, a))]])
    result = []
    for choice in product(*factors):
        perm = list(range(F))
        for pairs in choice:
            for src, dst in pairs:
                for x, y in zip(src, dst):
                    perm[x] = y
        result.append(perm)
    return result


def canonicalize(g: FlagGraph) -> CanonicalForm:
    flags_at = [[] for _ in range(g.n_vertices)]
    for f, v in enumerate(g.vertex_of):
        if v >= 0:
            flags_at[v].append(f)
    colors = _refine(g, flags_at, _initial_colors(g, flags_at))
    best = None
    winners = []
    for leaf in _leaves(g, flags_at, colors):
        order = sorted(range(g.n_vertices), key=lambda v: leaf[v])
        enc, recs = _encode(g, leaf, order)
        if best is None or enc < best:
            best, winners = enc, [(leaf, order, recs)]
        elif enc == best:
            winners.append((leaf, order, recs))
    if g.n_vertices == 0:
        enc, recs = _encode(g, [], [])
        best, winners = enc, [([], [], recs)]
    leaf0, order0, recs0 = winners[0]
    canon, fmap0, groups, loops = _build(g, order0, recs0)
    inv0 = [0] * g.n_flags
    for f, c in enumerate(fmap0):
        inv0[c] = f
    vertex_auts = []
    for leaf, order, recs in winners:
        _, fmap, _, _ = _build(g, order, recs)
        vertex_auts.append([fmap[inv0[c]] for c in range(g.n_flags)])
    local = _local_group(g.n_flags, groups, loops)
    auts = set()
    for a in vertex_auts:
        for l in local:
            auts.add(tuple(a[l[c]] for c in range(g.n_flags)))
    auts = tuple(sorted(auts))
    data = repr(best).encode()
    return CanonicalForm(canon, tuple(fmap0), tuple(leaf0), auts, data)


def isomorphic(a: FlagGraph, b: FlagGraph) -> bool:
    return canonicalize(a).graph == canonicalize(b).graph


def automorphisms(g: FlagGraph) -> list[tuple[int, ...]]:
    """Automorphisms of g itself (flag bijections of g)."""
    cf = canonicalize(g)
    back = [0] * g.n_flags
    for f, c in enumerate(cf.flag_map):
        back[c] = f
    return [tuple(back[a[cf.flag_map[f]]] for f in range(g.n_flags)) for a in cf.automorphisms]
