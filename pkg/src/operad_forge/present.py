"""
Presentations F(E)/(R): ideal closure inside truncated free constructions,
quotient dimensions, quadratic duality, cyclic quadraticity, symmetrization
of non-Sigma presentations and a few builtin presentations.

Tree flavors (operad, nonunital, nonsigma, cyclic) truncate by arity; the
graph flavors (modular, modular0, prop, properad, dioperad, halfprop)
truncate by vertex count.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .exactla import SparseEchelon, Subspace, annihilator
from .freecons import GRAPH_FLAVORS, FreeElement, FreeError, GraphConstruction, TreeOperad
from .freecons.graphs import substitute_decorated
from .freecons.trees import leaves, min_leaf
from .pasting import enumerate_directed_graphs, enumerate_stable_graphs
from .perm import ExtendedPermutation, Permutation
from .sigmod import (SigmaCollection, builtin, collection_from_json, collection_to_json,
                     dual_collection, extend_by_sign, symmetrize_collection, vertex_profile)
from .termlang import Term, TermError, evaluate_term, infer_profile, parse

__all__ = ["PresentationError", "Presentation", "QuotientComponent", "ideal_component",
           "quotient_dim", "quadratic_dual", "is_cyclic_quadratic", "symmetrize",
           "builtin_presentation", "BUILTIN_PRESENTATIONS", "presentation_from_json",
           "presentation_to_json", "tree_to_term", "hypercommutative_relation",
           "relation_subspace", "PRESENTATION_FLAVORS"]

TREE_PRESENTATION_FLAVORS = ("operad", "nonunital", "nonsigma", "cyclic")
PRESENTATION_FLAVORS = TREE_PRESENTATION_FLAVORS + tuple(GRAPH_FLAVORS)


class PresentationError(ValueError):
    pass


@dataclass
class QuotientComponent:
    profile: object
    free_dim: int
    ideal_dim: int
    coset_representatives: list     # free basis elements spanning a complement of the ideal
    ideal_basis: list               # sparse vectors in free-term coordinates

    @property
    def dimension(self) -> int:
        return self.free_dim - self.ideal_dim


class Presentation:
    """Generators E, relations R (term strings, parsed terms or free
    elements), and a truncation bound.  Immutable once built; quotient
    components are memoized per profile."""

    def __init__(self, flavor: str, generators: SigmaCollection, relations: Iterable = (),
                 truncation: int = 4, name: str = ""):
        if flavor not in PRESENTATION_FLAVORS:
            raise PresentationError(f"unknown presentation flavor {flavor!r}")
        if truncation < 1:
            raise PresentationError("truncation must be positive")
        self.flavor = flavor
        self.generators = generators
        self.truncation = truncation
        self.name = name
        self.space = self._make_space()
        self._texts: list[str] | None = []
        rels = []
        for r in relations:
            rels.append(self._relation(r))
        self.relations: tuple[FreeElement, ...] = tuple(rels)
        self._memo: dict = {}
        self._lock = threading.RLock()

    # -- construction -----------------------------------------------------------

    @property
    def is_tree(self) -> bool:
        return self.flavor in TREE_PRESENTATION_FLAVORS

    def _make_space(self):
        E = self.generators
        try:
            if self.is_tree:
                bound = self.truncation if E.dim(1) else None
                return TreeOperad(E, self.flavor, bound)
            return GraphConstruction(E, self.flavor, self.truncation)
        except FreeError as e:
            raise PresentationError(str(e)) from None

    def profiles(self) -> dict:
        out = {}
        for key in self.generators.keys():
            for name in self.generators.components[key].basis:
                out[name] = key
        return out

    def _relation(self, r) -> FreeElement:
        if isinstance(r, FreeElement):
            if r.space != self.space:
                raise PresentationError("relation lives in another free construction")
            self._texts = None
            return r
        text = r if isinstance(r, str) else None
        term = parse(r) if isinstance(r, str) else r
        if not isinstance(term, Term):
            raise PresentationError(f"cannot read relation {r!r}")
        infer_profile(term, self.profiles(), self.flavor)
        if self._texts is not None:
            self._texts.append(text if text is not None else str(term))
        try:
            return evaluate_term(term, self.space)
        except FreeError as e:
            raise PresentationError(f"relation {term}: {e}") from None

    @property
    def relation_texts(self) -> list[str] | None:
        return None if self._texts is None else list(self._texts)

    def __repr__(self):
        return (f"Presentation({self.name or '?'}: {self.flavor}, {len(self.relations)} relations, "
                f"truncation {self.truncation})")

    # -- profiles ---------------------------------------------------------------

    def _check_profile(self, profile):
        if self.is_tree:
            if not isinstance(profile, int) or profile < 1:
                raise PresentationError(f"arity expected, got {profile!r}")
            if profile > self.truncation:
                raise PresentationError(f"arity {profile} exceeds the truncation {self.truncation}")
        else:
            if not (isinstance(profile, tuple) and len(profile) == 2):
                raise PresentationError(f"profile pair expected, got {profile!r}")

    def free_basis(self, profile) -> list[FreeElement]:
        self._check_profile(profile)
        F = self.space
        if self.is_tree:
            return [F.basis_element(t) for t in F.basis(profile)]
        return list(F.basis(profile).elements)

    def free_dim(self, profile) -> int:
        self._check_profile(profile)
        return self.space.dim(profile)

    def coordinates(self, profile) -> list:
        """Term coordinates in which ideal vectors are expressed."""
        if self.is_tree:
            return list(self.space.basis(profile))
        keys: dict = {}
        for e in self.free_basis(profile):
            for t in e.terms:
                keys.setdefault(t, None)
        return sorted(keys, key=repr)

    # -- ideals -----------------------------------------------------------------

    def quotient_component(self, profile) -> QuotientComponent:
        self._check_profile(profile)
        with self._lock:
            if profile in self._memo:
                return self._memo[profile]
            ech = self._tree_ideal(profile) if self.is_tree else self._graph_ideal(profile)
            reps = []
            probe = SparseEchelon()
            probe.order = dict(ech.order)
            probe.rows = dict(ech.rows)
            for e in self.free_basis(profile):
                probe.declare(e.terms)
                if probe.add(e.terms):
                    reps.append(e)
            comp = QuotientComponent(profile, self.free_dim(profile), ech.dim, reps, ech.basis())
            if comp.dimension != len(reps):
                raise PresentationError("ideal escaped the free component; inconsistent closure")
            self._memo[profile] = comp
            return comp

    def _closure_moves(self, n: int):
        F = self.space
        moves = []
        for b in range(self.generators.dim(1)):
            c = F.corolla(b, 1)
            moves.append(lambda e, c=c: self._try_elem(lambda: F.circ(c, 1, e), n))
            moves += [lambda e, c=c, i=i: self._try_elem(lambda: F.circ(e, i, c), n)
                      for i in range(1, n + 1)]
        if self.flavor == "nonsigma":
            return moves
        if self.flavor == "cyclic":
            return moves + [lambda e, k=k: F.cyclic_act(e, ExtendedPermutation.transposition(n, k, k + 1))
                            for k in range(n)]
        return moves + [lambda e, k=k: F.act(e, Permutation.transposition(n, k, k + 1))
                        for k in range(1, n)]

    def _tree_ideal(self, n: int) -> SparseEchelon:
        F = self.space
        ech = SparseEchelon()
        ech.declare(F.basis(n))
        seeds: list[dict] = [r.terms for r in self.relations if r.key == n]
        for k in F.arities:
            m = n - k + 1
            if k == 1 or m < 1:
                continue                      # unary generators act as closure moves
            for vec in self.quotient_component(m).ideal_basis:
                y = FreeElement(F, m, vec)
                for b in range(self.generators.dim(k)):
                    c = F.corolla(b, k)
                    for i in range(1, m + 1):
                        seeds.append(self._try(lambda: F.circ(y, i, c)))
                    for j in range(1, k + 1):
                        seeds.append(self._try(lambda: F.circ(c, j, y)))
        self._saturate(ech, seeds, n)
        return ech

    @staticmethod
    def _try(fn):
        try:
            return fn().terms
        except FreeError:                     # composite beyond the truncation
            return {}

    def _try_elem(self, fn, n):
        try:
            return fn()
        except FreeError:
            return FreeElement(self.space, n, {})

    def _saturate(self, ech: SparseEchelon, seeds: list, n):
        moves = self._closure_moves(n) if self.is_tree else self._graph_moves(n)
        queue = []
        for s in seeds:
            if s and ech.add(s):
                queue.append(s)
        while queue:
            vec = queue.pop()
            e = FreeElement(self.space, n, vec)
            for mv in moves:
                img = mv(e).terms
                ech.declare(img)
                if ech.add(img):
                    queue.append(img)

    def _graph_moves(self, key):
        F = self.space
        if F.directed:
            m, n = key
            ident = lambda d: Permutation.identity(d)
            moves = [lambda e, k=k: F.act(e, (Permutation.transposition(m, k, k + 1), ident(n)))
                     for k in range(1, m)]
            moves += [lambda e, k=k: F.act(e, (ident(m), Permutation.transposition(n, k, k + 1)))
                      for k in range(1, n)]
            return moves
        g, n = key
        return [lambda e, k=k: F.act(e, ExtendedPermutation.transposition(n, k, k + 1)) for k in range(n)]

    def _relation_spaces(self) -> dict:
        """Per relation profile, a basis of the action-closed span of the relations."""
        with self._lock:
            if "_rels" in self._memo:
                return self._memo["_rels"]
            out = {}
            for key in sorted({r.key for r in self.relations}, key=repr):
                ech = SparseEchelon()
                seeds = [r.terms for r in self.relations if r.key == key]
                for s in seeds:
                    ech.declare(s)
                self._saturate(ech, seeds, key)
                out[key] = [FreeElement(self.space, key, v) for v in ech.basis()]
            self._memo["_rels"] = out
            return out

    def _outer_graphs(self, key, rel_key, budget: int):
        F = self.space
        if budget < 1:
            return []
        if F.directed:
            bi = sorted({k for k in self.generators.keys() if self.generators.dim(k)} | {rel_key})
            return enumerate_directed_graphs(key[0], key[1], budget, F.family, bi)
        gs = enumerate_stable_graphs(key[0], key[1], simply_connected=(self.flavor == "modular0"))
        return [G for G in gs if G.n_vertices <= budget]

    def _graph_ideal(self, key) -> SparseEchelon:
        E = self.generators
        ech = SparseEchelon()
        for e in self.free_basis(key):
            ech.declare(e.terms)
        seeds = []
        for rel_key, rels in self._relation_spaces().items():
            size = min(G.n_vertices for r in rels for (G, _) in r.terms)
            for O in self._outer_graphs(key, rel_key, self.truncation - size + 1):
                profs = [vertex_profile(O, v) for v in range(O.n_vertices)]
                for v in range(O.n_vertices):
                    if profs[v] != rel_key:
                        continue
                    others = [w for w in range(O.n_vertices) if w != v]
                    if any(E.dim(profs[w]) == 0 for w in others):
                        continue
                    for choice in product(*[range(E.dim(profs[w])) for w in others]):
                        for r in rels:
                            seeds.append(self._instance(O, v, others, choice, r))
        for s in seeds:
            if s:
                ech.declare(s)
                ech.add(s)
        return ech

    def _instance(self, O, v, others, choice, r: FreeElement) -> dict:
        F = self.space
        acc: dict = {}
        for (Gr, dr), c in r.items():
            assign = {v: (Gr, list(dr))}
            for w, b in zip(others, choice):
                assign[w] = (None, b)
            G, decs = substitute_decorated(O, assign)
            if not F._allowed(G):
                return {}
            e = F.from_decorated(G, decs, c)
            for t, a in e.terms.items():
                acc[t] = acc.get(t, 0) + a
        return {t: a for t, a in acc.items() if a}

    # -- public queries ---------------------------------------------------------

    def ideal_component(self, profile) -> Subspace:
        comp = self.quotient_component(profile)
        coords = self.coordinates(profile)
        ech = SparseEchelon()
        ech.declare(coords)
        for v in comp.ideal_basis:
            ech.add(v)
        return ech.to_subspace(coords)

    def quotient_dim(self, profile) -> int:
        return self.quotient_component(profile).dimension

    def is_zero(self, e: FreeElement) -> bool:
        """Whether e vanishes in the quotient."""
        comp = self.quotient_component(e.key)
        ech = SparseEchelon()
        ech.declare(self.coordinates(e.key))
        ech.declare(e.terms)
        for v in comp.ideal_basis:
            ech.add(v)
        return ech.contains(e.terms)

    def evaluate(self, text: str) -> FreeElement:
        term = parse(text)
        infer_profile(term, self.profiles(), self.flavor)
        return evaluate_term(term, self.space)

    @property
    def is_quadratic(self) -> bool:
        E = self.generators
        return (self.flavor in ("operad", "nonunital") and E.flavor == "sigma"
                and all(k == 2 for k in E.keys() if E.dim(k))
                and all(r.key == 3 for r in self.relations))


def ideal_component(P: Presentation, profile) -> Subspace:
    return P.ideal_component(profile)


def quotient_dim(P: Presentation, profile) -> int:
    return P.quotient_dim(profile)


# -- quadratic duality ------------------------------------------------------------

def _shape3(t) -> int:
    """Shape of an arity-3 binary tree: 3 = ((1 2) 3), 2 = ((1 3) 2), 1 = (1 (2 3))."""
    kids = t[1]
    if isinstance(kids[0], int):
        return 1
    return 3 if leaves(kids[0]) == (1, 2) else 2


def _inner(t) -> int:
    kids = t[1]
    return kids[1][0] if isinstance(kids[0], int) else kids[0][0]


# Sign of the pairing per shape, pinned by requiring the dual of Com to be
# cut out exactly by the Jacobi identity.
PAIRING_SIGN = {3: 1, 2: -1, 1: -1}


def _pairing(basis: Sequence) -> list[list[Fraction]]:
    n = len(basis)
    m = [[Fraction(0)] * n for _ in range(n)]
    for i, t in enumerate(basis):
        m[i][i] = Fraction(PAIRING_SIGN[_shape3(t)])
    return m


def relation_subspace(P: Presentation) -> Subspace:
    """The Sigma_3-closed relation space inside F(E)(3)."""
    return P.ideal_component(3)


def quadratic_dual(P: Presentation, truncation: int | None = None) -> Presentation:
    if not P.is_quadratic:
        raise PresentationError("quadratic dual needs binary generators and relations in arity 3")
    Ed = dual_collection(P.generators)
    D = Presentation(P.flavor, Ed, (), truncation or P.truncation, (P.name or "P") + "!")
    basis = P.space.basis(3)
    dual_basis = D.space.basis(3)
    if [(_shape3(t), t[0], _inner(t)) for t in basis] != [(_shape3(t), t[0], _inner(t)) for t in dual_basis]:
        raise PresentationError("free components of P and its dual are not aligned")
    R = relation_subspace(P)
    ann = annihilator(R, _pairing(basis))
    rels = []
    for row in ann.basis:
        rels.append(D.space.element({t: c for t, c in zip(dual_basis, row) if c}, 3))
    texts = [element_to_term(e) for e in rels]
    return Presentation(P.flavor, Ed, texts, D.truncation, D.name)


def tree_to_term(F: TreeOperad, t) -> str:
    """A term-language expression for a single canonical tree."""
    if isinstance(t, int):
        return "(id 1)"
    E = F.E

    def planar(x):
        b, kids = x
        expr = E.components[len(kids)].basis[b]
        pos = []
        for c in kids:
            pos.append(c)
        offs = []
        acc = 1
        for c in kids:
            offs.append(acc)
            acc += 1 if isinstance(c, int) else len(leaves(c))
        for j in range(len(kids) - 1, -1, -1):
            c = kids[j]
            if not isinstance(c, int):
                expr = f"(circ {j + 1} {expr} {planar(c)})"
        return expr

    order = leaves(t)                   # leaf labels in reading order
    expr = planar(t)
    if list(order) == sorted(order) or F.planar:
        return expr
    # reading position p carries label order[p-1]; that is the right action of
    # sigma with sigma^-1(p) = order[p-1]
    inv = Permutation(tuple(order))
    sigma = inv.inverse()
    return f"(comp {expr} (perm {' '.join(map(str, sigma.images))}))"


def element_to_term(e: FreeElement) -> str:
    F = e.space
    parts = []
    for t, c in e.items():
        s = tree_to_term(F, t)
        parts.append(s if c == 1 else f"(scale {c} {s})")
    if not parts:
        raise PresentationError("cannot print the zero element")
    return parts[0] if len(parts) == 1 else "(add " + " ".join(parts) + ")"


def is_cyclic_quadratic(P: Presentation) -> bool:
    """Whether the relation space is stable under the Sigma_3^+ action of
    the cyclic free operad on the sign-extended generators."""
    if not P.is_quadratic:
        raise PresentationError("cyclic quadraticity is defined for quadratic presentations")
    C = TreeOperad(extend_by_sign(P.generators), "cyclic")
    basis = P.space.basis(3)
    if C.basis(3) != basis:
        raise PresentationError("cyclic free component does not match")
    R = relation_subspace(P)
    ech = SparseEchelon()
    ech.declare(basis)
    for row in R.basis:
        ech.add({t: c for t, c in zip(basis, row) if c})
    for row in R.basis:
        e = C.element({t: c for t, c in zip(basis, row) if c}, 3)
        for k in range(3):
            img = C.cyclic_act(e, ExtendedPermutation.transposition(3, k, k + 1))
            if not ech.contains(img.terms):
                return False
    return True


# -- symmetrization -------------------------------------------------------------------

def symmetrize(P: Presentation) -> Presentation:
    """Sigma[P]: generators E (x) Q[Sigma_n], relations the planar relations
    with every vertex decorated by (generator, identity)."""
    if P.flavor != "nonsigma":
        raise PresentationError("symmetrization takes a non-Sigma presentation")
    S = symmetrize_collection(P.generators)
    Q = Presentation("operad", S, (), P.truncation, f"Sigma[{P.name}]")
    F = Q.space

    def lift(t):
        if isinstance(t, int):
            return t
        b, kids = t
        k = len(kids)
        fact = 1
        for i in range(2, k + 1):
            fact *= i
        return (b * fact, tuple(lift(c) for c in kids))

    rels = [F.element({lift(t): c for t, c in r.items()}, r.key) for r in P.relations]
    return Presentation("operad", S, [element_to_term(r) for r in rels], P.truncation, Q.name)


# -- hypercommutative relations ----------------------------------------------------

def hypercommutative_relation(n: int, F: TreeOperad | None = None) -> FreeElement:
    """The n-th hypercommutative relation in arity n + 3:

        sum over S1 + S2 = {x1..xn} of ((u,v,x_S1), w, x_S2) - ((u,w,x_S1), v, x_S2)

    with u, v, w, x_i the leaves 1, 2, 3, 3 + i and fully symmetric generators
    (k) of every arity k >= 2."""
    if F is None:
        comps = {}
        from .sigmod import Component
        for k in range(2, n + 3):
            comps[k] = Component(k, 1, (f"h{k}",), {j: ((Fraction(1),),) for j in range(1, k)})
        F = TreeOperad(SigmaCollection("sigma", comps, "E_HyCom"), "nonunital")
    xs = list(range(4, n + 4))
    terms: dict = {}
    for r in range(n + 1):
        for S1 in combinations(xs, r):
            S2 = [x for x in xs if x not in S1]
            for first, second, sign in ((2, 3, 1), (3, 2, -1)):
                inner_leaves = sorted([1, first] + list(S1))
                inner = (0, tuple(inner_leaves))
                outer_kids = sorted([inner, second] + S2, key=lambda c: c if isinstance(c, int) else min_leaf(c))
                t = (0, tuple(outer_kids))
                terms[t] = terms.get(t, 0) + sign
    return F.element({t: c for t, c in terms.items() if c}, n + 3)


# -- builtins -------------------------------------------------------------------------

ASSOC = "(sub (circ 1 mu mu) (circ 2 mu mu))"
JACOBI = ("(add (circ 1 beta beta) (comp (circ 1 beta beta) (perm 2 3 1)) "
          "(comp (circ 1 beta beta) (perm 3 1 2)))")
PROP_ASSOC = "(sub (comp mu (tensor mu (id 1))) (comp mu (tensor (id 1) mu)))"
PROP_COASSOC = "(sub (comp (tensor delta (id 1)) delta) (comp (tensor (id 1) delta) delta))"
LIE_JACOBI = ("(add (comp beta (tensor beta (id 1))) "
              "(comp beta (tensor beta (id 1)) (perm 2 3 1)) "
              "(comp beta (tensor beta (id 1)) (perm 3 1 2)))")
LIE_COJACOBI = ("(add (comp (tensor delta (id 1)) delta) "
                "(comp (perm 2 3 1) (tensor delta (id 1)) delta) "
                "(comp (perm 3 1 2) (tensor delta (id 1)) delta))")
# delta[a,b] = [a1,b] (x) a2 + [a,b1] (x) b2 + a1 (x) [a2,b] + b1 (x) [a,b2]
LIE_COMPAT = ("(sub (comp delta beta) (add "
              "(comp (tensor beta (id 1)) (perm 1 3 2) (tensor delta (id 1))) "
              "(comp (tensor beta (id 1)) (tensor (id 1) delta)) "
              "(comp (tensor (id 1) beta) (tensor delta (id 1))) "
              "(comp (tensor (id 1) beta) (perm 2 1 3) (tensor (id 1) delta))))")
# Delta(a b) = a1 (x) a2 b + a b1 (x) b2
INF_COMPAT = ("(sub (comp delta mu) (add "
              "(comp (tensor (id 1) mu) (tensor delta (id 1))) "
              "(comp (tensor mu (id 1)) (tensor (id 1) delta))))")
HALF_COMPAT = "(comp delta mu)"

_NS_ASS = {"flavor": "nonsigma", "name": "E_NsAss", "components": [{"arity": 2, "dim": 1, "basis": ["mu"]}]}

BUILTIN_PRESENTATIONS = {
    "Com": ("operad", "E_Com", [ASSOC], 6),
    "Ass": ("operad", "E_Ass", [ASSOC], 6),
    "Lie": ("operad", "E_Lie", [JACOBI], 6),
    "NsAss": ("nonsigma", _NS_ASS, [ASSOC], 6),
    "LieBialgebra": ("dioperad", "E_LieBialgebra", [LIE_JACOBI, LIE_COJACOBI, LIE_COMPAT], 3),
    "InfinitesimalBialgebra": ("dioperad", "E_InfBialgebra", [PROP_ASSOC, PROP_COASSOC, INF_COMPAT], 3),
    "HalfBialgebra": ("halfprop", "E_bialgebra", [PROP_ASSOC, PROP_COASSOC, HALF_COMPAT], 3),
}


def _generators(source) -> SigmaCollection:
    if isinstance(source, SigmaCollection):
        return source
    if isinstance(source, str):
        return builtin(source)
    return collection_from_json(source)


def builtin_presentation(name: str, truncation: int | None = None) -> Presentation:
    if name not in BUILTIN_PRESENTATIONS:
        raise PresentationError(f"unknown presentation {name!r}; known: {', '.join(BUILTIN_PRESENTATIONS)}")
    flavor, gens, rels, trunc = BUILTIN_PRESENTATIONS[name]
    return Presentation(flavor, _generators(gens), rels, truncation or trunc, name)


# -- JSON -----------------------------------------------------------------------------

def presentation_from_json(data) -> Presentation:
    if isinstance(data, str):
        data = json.loads(data)
    if "builtin" in data:
        return builtin_presentation(data["builtin"], data.get("truncation"))
    try:
        flavor = data.get("flavor", "operad")
        gens = _generators(data["generators"])
        return Presentation(flavor, gens, data.get("relations", []), int(data.get("truncation", 4)),
                            data.get("name", ""))
    except KeyError as e:
        raise PresentationError(f"presentation JSON lacks {e}") from None
    except TermError as e:
        raise PresentationError(f"bad relation: {e}") from None


def presentation_to_json(P: Presentation) -> dict:
    texts = P.relation_texts
    if texts is None:
        raise PresentationError("relations were given as elements; no term text to serialize")
    return {"flavor": P.flavor, "name": P.name, "generators": collection_to_json(P.generators),
            "relations": texts, "truncation": P.truncation}
