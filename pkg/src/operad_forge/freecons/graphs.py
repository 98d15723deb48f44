"""
Free constructions over graphs with automorphisms: modular operads (stable
graphs, optionally only simply connected ones) and the PROP-like family
(PROPs, properads, dioperads, 1/2PROPs over directed graphs).

A term is (G, d) with G a canonical FlagGraph and d a tuple of basis indices,
one per vertex, relative to the reference flag orders of G.  An element is
kept in averaged form: each decorated graph is replaced by the mean of its
images under Aut(G).  Two decorated graphs are equal in the coinvariants
exactly when their averages agree, so averaged vectors are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..exactla import SparseEchelon, invariant_projector_rank
from ..pasting import (FlagGraph, canonicalize, corolla, directed_corolla, enumerate_directed_graphs,
                       enumerate_stable_graphs, family_predicate, genus, identity_wires,
                       substitute_with_map)
from ..pasting.graph import betti1
from ..perm import Permutation
from ..sigmod import (SigmaCollection, decorate, induced_action, reference_order, transport_vector,
                      vertex_profile)
from .element import FreeElement, FreeError, add_into

__all__ = ["GraphConstruction", "GRAPH_FLAVORS", "FreeComponentBasis", "ClassInfo",
           "normalize_decorated", "substitute_decorated"]

GRAPH_FLAVORS = {
    "modular": ("modular", None),
    "modular0": ("modular", None),
    "prop": ("bimodule", "all"),
    "properad": ("bimodule", "connected"),
    "dioperad": ("bimodule", "connected_simply_connected"),
    "halfprop": ("bimodule", "half"),
}


def _map_order(order, phi):
    if order and isinstance(order[0], tuple):
        return tuple(tuple(phi[f] for f in part) for part in order)
    return tuple(phi[f] for f in order)


def _push(E, G: FlagGraph, decs: Sequence[Mapping], fmap, vmap, target: FlagGraph) -> dict:
    """Move per-vertex decorations of G along a flag map into target; returns
    {decoration tuple of target: coefficient}."""
    V = target.n_vertices
    factors: list = [None] * V
    for v in range(G.n_vertices):
        w = vmap[v]
        key = vertex_profile(G, v)
        moved = _map_order(reference_order(G, v), fmap)
        factors[w] = transport_vector(E, key, dict(decs[v]), moved, reference_order(target, w))
    terms = {(): Fraction(1)}
    for fac in factors:
        nxt: dict = {}
        for t, c in terms.items():
            for b, a in fac.items():
                add_into(nxt, {t + (b,): c * a})
        terms = nxt
    return terms


def _vertex_map_of(G: FlagGraph, fmap, target: FlagGraph) -> list[int]:
    vm = [None] * G.n_vertices
    for f, v in enumerate(G.vertex_of):
        if v >= 0:
            vm[v] = target.vertex_of[fmap[f]]
    return vm


def normalize_decorated(E: SigmaCollection, G: FlagGraph, decs: Sequence[Mapping]) -> dict:
    """Canonical averaged expansion {(canonical graph, decoration tuple): coeff}."""
    cf = canonicalize(G)
    Gc = cf.graph
    base = _push(E, G, decs, cf.flag_map, cf.vertex_map, Gc)
    if not base:
        return {}
    auts = cf.automorphisms
    if len(auts) == 1:
        return {(Gc, d): c for d, c in base.items()}
    acc: dict = {}
    scale = Fraction(1, len(auts))
    for phi in auts:
        vm = _vertex_map_of(Gc, phi, Gc)
        for d, c in base.items():
            img = _push(E, Gc, [{b: Fraction(1)} for b in d], phi, vm, Gc)
            add_into(acc, {(Gc, d2): c * a * scale for d2, a in img.items()})
    return acc


def substitute_decorated(outer: FlagGraph, assignment: Mapping[int, tuple]):
    """assignment[v] = (inner graph, inner decorations, leg_map or None).
    Returns (graph, decorations) of the flattened decorated scheme; untouched
    outer vertices keep the decorations passed as assignment[v] = (None, dec)."""
    subst = {}
    keep = {}
    for v, spec in assignment.items():
        inner, decs = spec[0], spec[1]
        lm = spec[2] if len(spec) > 2 else None
        if inner is None:
            keep[v] = decs
        else:
            subst[v] = (inner, lm) if lm is not None else inner
    G, vmap = substitute_with_map(outer, subst)
    out = [None] * G.n_vertices
    for (v, w), r in vmap.items():
        if v is None:
            out[r] = keep[w]
        else:
            out[r] = assignment[v][1][w]
    return G, out


@dataclass(frozen=True)
class ClassInfo:
    graph: FlagGraph
    aut_order: int
    decoration_dim: int
    coinvariant_dim: int


@dataclass
class FreeComponentBasis:
    key: object
    classes: list[ClassInfo] = field(default_factory=list)
    elements: list[FreeElement] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.elements)


class GraphConstruction:
    def __init__(self, E: SigmaCollection, flavor: str, max_vertices: int | None = None):
        if flavor not in GRAPH_FLAVORS:
            raise FreeError(f"unknown graph flavor {flavor!r}")
        need, family = GRAPH_FLAVORS[flavor]
        if E.flavor != need:
            raise FreeError(f"{flavor} flavor needs a {need} collection, got {E.flavor}")
        if need == "bimodule" and max_vertices is None:
            raise FreeError("PROP-like components are infinite; pass max_vertices")
        self.E = E
        self.flavor = flavor
        self.family = family
        self.max_vertices = max_vertices
        self.pred = family_predicate(family) if family else None
        self._basis_cache: dict = {}

    def __eq__(self, other):
        return (isinstance(other, GraphConstruction) and self.flavor == other.flavor
                and self.E == other.E and self.max_vertices == other.max_vertices)

    def __hash__(self):
        return hash((self.flavor, self.E, self.max_vertices))

    @property
    def directed(self) -> bool:
        return self.family is not None

    # -- terms ------------------------------------------------------------------

    def format_term(self, t) -> str:
        G, d = t
        names = []
        for v, b in enumerate(d):
            names.append(self.E.components[vertex_profile(G, v)].basis[b])
        return f"<{canonicalize(G).hex}> # " + " ".join(names)

    def profile_of(self, G: FlagGraph):
        if self.directed:
            legs = [G.labels[f] for f in G.legs()]
            return (sum(1 for l in legs if l[0] == "out"), sum(1 for l in legs if l[0] == "in"))
        return (genus(G), len(G.legs()) - 1)

    def _allowed(self, G: FlagGraph) -> bool:
        if self.max_vertices is not None and G.n_vertices > self.max_vertices:
            return False
        if self.flavor == "modular0" and betti1(G) != 0:
            return False
        if self.pred is not None and not self.pred(G):
            return False
        return True

    def from_decorated(self, G: FlagGraph, decs: Sequence, coeff=1, strict: bool = True) -> FreeElement:
        """Element of a decorated graph; decs[v] is a basis index or a sparse vector."""
        if not self._allowed(G):
            if strict:
                raise FreeError(f"graph outside the {self.flavor} family or truncation")
            return FreeElement(self, self.profile_of(G), {})
        vecs = [{d: Fraction(1)} if isinstance(d, int) else dict(d) for d in decs]
        for v in range(G.n_vertices):
            if self.E.dim(vertex_profile(G, v)) == 0:
                raise FreeError(f"no generators of profile {vertex_profile(G, v)}")
        terms = normalize_decorated(self.E, G, vecs)
        return FreeElement(self, self.profile_of(G), {t: c * coeff for t, c in terms.items()})

    def generator(self, name: str) -> FreeElement:
        key, b = self.E.find(name)
        if self.directed:
            G = directed_corolla(*key)
        else:
            G = corolla(key[1] + 1, "modular", key[0])
        return self.from_decorated(G, [b])

    def identity(self, n: int = 1) -> FreeElement:
        if not self.directed:
            raise FreeError("identities are PROP elements")
        return self.from_decorated(identity_wires(n), [])

    def perm(self, sigma: Permutation) -> FreeElement:
        """The permutation morphism sending input wire i to output sigma(i)."""
        if not self.directed:
            raise FreeError("permutations are PROP elements")
        return self.from_decorated(identity_wires(sigma.degree, sigma.images), [])

    # -- structure operations ---------------------------------------------------

    def _pairs(self, a: FreeElement, b: FreeElement):
        for (Ga, da), ca in a.items():
            for (Gb, db), cb in b.items():
                yield Ga, da, Gb, db, ca * cb

    def _collect(self, key, parts) -> FreeElement:
        acc: dict = {}
        for G, decs, c in parts:
            if not self._allowed(G):
                raise FreeError(f"composite leaves the {self.flavor} family or truncation")
            add_into(acc, normalize_decorated(self.E, G, [{d: Fraction(1)} for d in decs]), c)
        return FreeElement(self, key, acc)

    def modular_compose(self, a: FreeElement, i: int, b: FreeElement, j: int) -> FreeElement:
        """a o_{i,j} b: glue leg i of a to leg j of b."""
        if self.directed:
            raise FreeError("o_{i,j} is a modular operation")
        (ga, m), (gb, n) = a.key, b.key
        if not (0 <= i <= m and 0 <= j <= n):
            raise FreeError("leg index out of range")
        key = (ga + gb, m + n - 1)
        return self._collect(key, self._glue_two(a, i, b, j))

    def _glue_two(self, a, i, b, j):
        (_, m), (_, n) = a.key, b.key
        labels_a, labels_b = {}, {}
        for k in range(m + 1):
            if k < i:
                labels_a[k] = k
            elif k > i:
                labels_a[k] = k + n - 1
        for l in range(n + 1):
            if l > j:
                labels_b[l] = i + l - j - 1
            elif l < j:
                labels_b[l] = i + n - j + l
        for Ga, da, Gb, db, c in self._pairs(a, b):
            vo = [0] * (m + 1) + [1] * (n + 1)
            inv = list(range(m + n + 2))
            inv[i], inv[m + 1 + j] = m + 1 + j, i
            lab = [labels_a.get(k) for k in range(m + 1)] + [labels_b.get(l) for l in range(n + 1)]
            outer = FlagGraph(tuple(vo), tuple(inv), tuple(lab), 2, "modular", (genus(Ga), genus(Gb)))
            lm_a = {k: k for k in range(m + 1)}
            lm_b = {l: m + 1 + l for l in range(n + 1)}
            G, decs = substitute_decorated(outer, {0: (Ga, da, lm_a), 1: (Gb, db, lm_b)})
            yield G, decs, c

    def contract(self, a: FreeElement, i: int, j: int) -> FreeElement:
        """xi_{i,j}(a): glue legs i and j of a; the remaining legs keep their order."""
        if self.directed:
            raise FreeError("contraction is a modular operation")
        if self.flavor == "modular0":
            raise FreeError("contractions leave the simply connected family")
        g, m = a.key
        if i == j or not (0 <= i <= m and 0 <= j <= m):
            raise FreeError("contraction needs two distinct legs")
        rest = [k for k in range(m + 1) if k not in (i, j)]
        new = {k: r for r, k in enumerate(rest)}
        parts = []
        for (Ga, da), c in a.items():
            inv = list(range(m + 1))
            inv[i], inv[j] = j, i
            lab = [new.get(k) for k in range(m + 1)]
            outer = FlagGraph((0,) * (m + 1), tuple(inv), tuple(lab), 1, "modular", (genus(Ga),))
            G, decs = substitute_decorated(outer, {0: (Ga, da, {k: k for k in range(m + 1)})})
            parts.append((G, decs, c))
        return self._collect((g + 1, m - 2), parts)

    def compose(self, f: FreeElement, g: FreeElement) -> FreeElement:
        """Vertical composition f o g (g first): (m,n) x (n,k) -> (m,k)."""
        if not self.directed:
            raise FreeError("vertical composition is a PROP operation")
        (m, n), (n2, k) = f.key, g.key
        if n != n2:
            raise FreeError(f"profile mismatch: ({m},{n}) after ({n2},{k})")
        vo = [0] * (m + n) + [1] * (n + k)
        inv = list(range(m + n + n + k))
        for t in range(n):
            a, b = m + t, m + n + t
            inv[a], inv[b] = b, a
        lab = [("out", i + 1) for i in range(m)] + [None] * n + [None] * n + [("in", j + 1) for j in range(k)]
        dirs = ["out"] * m + ["in"] * n + ["out"] * n + ["in"] * k
        outer = FlagGraph(tuple(vo), tuple(inv), tuple(lab), 2, "directed", None, tuple(dirs))
        parts = []
        for Gf, df, Gg, dg, c in self._pairs(f, g):
            G, decs = substitute_decorated(outer, {0: (Gf, df), 1: (Gg, dg)})
            parts.append((G, decs, c))
        return self._collect((m, k), parts)

    def tensor(self, f: FreeElement, g: FreeElement) -> FreeElement:
        """Horizontal composition: f's wires first."""
        if not self.directed:
            raise FreeError("horizontal composition is a PROP operation")
        (m1, n1), (m2, n2) = f.key, g.key
        lab = ([("out", i + 1) for i in range(m1)] + [("in", j + 1) for j in range(n1)]
               + [("out", m1 + i + 1) for i in range(m2)] + [("in", n1 + j + 1) for j in range(n2)])
        vo = [0] * (m1 + n1) + [1] * (m2 + n2)
        dirs = ["out"] * m1 + ["in"] * n1 + ["out"] * m2 + ["in"] * n2
        F = len(vo)
        outer = FlagGraph(tuple(vo), tuple(range(F)), tuple(lab), 2, "directed", None, tuple(dirs))
        parts = []
        for Gf, df, Gg, dg, c in self._pairs(f, g):
            G, decs = substitute_decorated(outer, {0: (Gf, df), 1: (Gg, dg)})
            parts.append((G, decs, c))
        return self._collect((m1 + m2, n1 + n2), parts)

    def act(self, f: FreeElement, tau) -> FreeElement:
        """Leg relabeling.  Modular: an ExtendedPermutation, leg j -> tau^-1(j).
        Directed: a pair (sigma, tau) acting as sigma . f . tau."""
        parts = []
        if self.directed:
            sigma, tau_ = tau
            si, ti = sigma, tau_.inverse()

            def rel(l):
                return ("out", si(l[1])) if l[0] == "out" else ("in", ti(l[1]))
        else:
            inv = tau.inverse()

            def rel(l):
                return inv(l)
        for (G, d), c in f.items():
            parts.append((G.relabel_legs(rel), d, c))
        return self._collect(f.key, parts)

    # -- bases ------------------------------------------------------------------

    def graphs(self, key) -> list[FlagGraph]:
        if self.directed:
            m, n = key
            bi = [k for k in self.E.keys() if self.E.dim(k)]
            gs = enumerate_directed_graphs(m, n, self.max_vertices, self.family, bi)
        else:
            g, n = key
            gs = enumerate_stable_graphs(g, n, simply_connected=(self.flavor == "modular0"))
            if self.max_vertices is not None:
                gs = [G for G in gs if G.n_vertices <= self.max_vertices]
        return gs

    def basis(self, key) -> FreeComponentBasis:
        if key in self._basis_cache:
            return self._basis_cache[key]
        out = FreeComponentBasis(key)
        for G in self.graphs(key):
            D = decorate(self.E, G)
            if D.dim == 0:
                continue
            ech = SparseEchelon()
            elems = []
            for idx in D.indices():
                e = self.from_decorated(G, list(idx))
                ech.declare(e.terms)
                if ech.add(e.terms):
                    elems.append(e)
            cf = canonicalize(G)
            out.classes.append(ClassInfo(cf.graph, cf.aut_order, D.dim, len(elems)))
            out.elements.extend(elems)
        self._basis_cache[key] = out
        return out

    def dim(self, key) -> int:
        return self.basis(key).dim

    def coinvariant_dim(self, G: FlagGraph) -> int:
        """Second route: rank of the averaging projector built from the induced
        automorphism matrices."""
        from ..pasting import automorphisms
        mats = [induced_action(self.E, G, phi) for phi in automorphisms(G)]
        return invariant_projector_rank(mats)
