"""
Free operads over trees: unital, non-unital, non-Sigma, cyclic and May flavors.

A term is either a leaf label (an int; alone it is the exceptional tree) or
a vertex (b, children) where b indexes a basis element of E(len(children)).
Children are kept sorted by their smallest leaf, so leaf-labeled trees are
rigid and a term is canonical once its decorations have been transported to
that order.  Non-Sigma terms are planar and keep their leaves in order 1..n.

Cyclic terms use the same shape rooted at leg 0; the vertex slots are
(parent, child 1, ..., child k) and E is a Sigma^+-module.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from ..pasting import FlagGraph, nested_trees
from ..perm import ExtendedPermutation, Permutation
from ..sigmod import SigmaCollection, transport_vector
from .element import FreeElement, FreeError, add_into

__all__ = ["TreeOperad", "TREE_FLAVORS", "leaves", "min_leaf", "n_vertices", "shape",
           "is_may_term", "tree_to_graph"]

TREE_FLAVORS = ("operad", "nonunital", "nonsigma", "cyclic", "may")
_E_FLAVOR = {"operad": "sigma", "nonunital": "sigma", "may": "sigma", "nonsigma": "nonsigma",
             "cyclic": "sigma_plus"}


def leaves(t) -> tuple[int, ...]:
    if isinstance(t, int):
        return (t,)
    out: tuple[int, ...] = ()
    for c in t[1]:
        out += leaves(c)
    return out


def min_leaf(t) -> int:
    while not isinstance(t, int):
        t = t[1][0] if t[1] else None
        if t is None:
            raise FreeError("vertex without inputs")
    return t


def n_vertices(t) -> int:
    return 0 if isinstance(t, int) else 1 + sum(n_vertices(c) for c in t[1])


def shape(t):
    return t if isinstance(t, int) else tuple(shape(c) for c in t[1])


def decorations(t) -> list[int]:
    """Basis indices in preorder."""
    if isinstance(t, int):
        return []
    out = [t[0]]
    for c in t[1]:
        out += decorations(c)
    return out


def is_may_term(t) -> bool:
    """Every vertex has only leaves or only vertices as inputs."""
    if isinstance(t, int):
        return True
    kinds = {isinstance(c, int) for c in t[1]}
    return len(kinds) <= 1 and all(is_may_term(c) for c in t[1])


def _relabel(t, f):
    if isinstance(t, int):
        return f(t)
    return (t[0], tuple(_relabel(c, f) for c in t[1]))


def _shift(t, by: int):
    return _relabel(t, lambda j: j + by)


def _graft(s, i: int, t, n: int):
    """s with leaf i replaced by t (whose n leaves move to i..i+n-1)."""
    def walk(x):
        if isinstance(x, int):
            if x < i:
                return x
            if x > i:
                return x + n - 1
            return _shift(t, i - 1)
        return (x[0], tuple(walk(c) for c in x[1]))
    return walk(s)


def _fmt_shape(t) -> str:
    if isinstance(t, int):
        return str(t)
    return "(" + " ".join(_fmt_shape(c) for c in t[1]) + ")"


def tree_to_graph(t, kind: str = "rooted") -> tuple[FlagGraph, tuple[int, ...]]:
    """The flag graph of a term together with the vertex decorations
    (vertices numbered in preorder; each vertex's flags are created in slot
    order: parent first, then the children)."""
    if isinstance(t, int):
        dirs = (None, None) if kind == "rooted" else None
        return FlagGraph((-1, -1), (1, 0), (0, t), 0, kind, None, dirs), ()
    vo, inv, lab, dirs, decs = [], [], [], [], []

    def flag(v, label, d):
        vo.append(v)
        inv.append(len(inv))
        lab.append(label)
        dirs.append(d)
        return len(vo) - 1

    def build(x) -> int:
        v = len(decs)
        decs.append(x[0])
        out = flag(v, None, "out")
        for c in x[1]:
            fin = flag(v, None, "in")
            if isinstance(c, int):
                lab[fin] = c
            else:
                cout = build(c)
                inv[fin], inv[cout] = cout, fin
        return out

    root = build(t)
    lab[root] = 0
    g = FlagGraph(tuple(vo), tuple(inv), tuple(lab), len(decs), kind, None,
                  tuple(dirs) if kind == "rooted" else None)
    return g, tuple(decs)


class TreeOperad:
    """Free (possibly truncated) operad-like structure generated by E."""

    def __init__(self, E: SigmaCollection, flavor: str = "operad", max_vertices: int | None = None):
        if flavor not in TREE_FLAVORS:
            raise FreeError(f"unknown tree flavor {flavor!r}")
        if E.flavor != _E_FLAVOR[flavor]:
            raise FreeError(f"{flavor} flavor needs a {_E_FLAVOR[flavor]} collection, got {E.flavor}")
        self.E = E
        self.flavor = flavor
        self.max_vertices = max_vertices
        self.arities = sorted(k for k in E.keys() if E.dim(k))
        if 0 in self.arities:
            raise FreeError("generators of arity 0 make trees non-rigid; not supported")
        if 1 in self.arities and max_vertices is None:
            raise FreeError("unary generators give infinite components; pass max_vertices")
        self._basis_cache: dict[int, list] = {}

    def __eq__(self, other):
        return (isinstance(other, TreeOperad) and self.flavor == other.flavor
                and self.E == other.E and self.max_vertices == other.max_vertices)

    def __hash__(self):
        return hash((self.flavor, self.E, self.max_vertices))

    @property
    def unital(self) -> bool:
        return self.flavor in ("operad", "cyclic")

    @property
    def planar(self) -> bool:
        return self.flavor == "nonsigma"

    # -- terms ------------------------------------------------------------------

    def arity(self, t) -> int:
        return len(leaves(t))

    def format_term(self, t) -> str:
        names = []
        stack = [t]
        while stack:
            x = stack.pop()
            if isinstance(x, int):
                continue
            names.append(self.E.components[len(x[1])].basis[x[0]])
            stack.extend(reversed(x[1]))
        return _fmt_shape(t) + " # " + " ".join(names)

    def _transport(self, b: int, k: int, old: Sequence, new: Sequence) -> dict:
        if self.flavor == "cyclic":
            old, new = ("parent",) + tuple(old), ("parent",) + tuple(new)
        return transport_vector(self.E, k, {b: Fraction(1)}, old, new)

    def canonical(self, t) -> dict:
        """Canonical expansion {term: coefficient} of a possibly unsorted term."""
        if isinstance(t, int):
            return {t: Fraction(1)}
        b, kids = t
        k = len(kids)
        if self.planar:
            ls = leaves(t)
            if list(ls) != sorted(ls):
                raise FreeError("planar terms must list their leaves in order")
            return {t: Fraction(1)}
        out: dict = {}
        options = [list(self.canonical(c).items()) for c in kids]
        for combo in product(*options):
            new_kids = [c for c, _ in combo]
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            mins = [min_leaf(c) for c in new_kids]
            order = sorted(range(k), key=lambda i: mins[i])
            if order == list(range(k)):
                vec = {b: Fraction(1)}
            else:
                vec = self._transport(b, k, mins, sorted(mins))
                new_kids = [new_kids[i] for i in order]
            kt = tuple(new_kids)
            for b2, c2 in vec.items():
                add_into(out, {(b2, kt): coeff * c2})
        return out

    def element(self, terms, arity: int | None = None) -> FreeElement:
        acc: dict = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for t, c in items:
            if arity is None:
                arity = self.arity(t)
            elif self.arity(t) != arity:
                raise FreeError("terms of different arities")
            self._check_term(t)
            add_into(acc, self.canonical(t), c)
        if arity is None:
            raise FreeError("empty element needs an explicit arity")
        return FreeElement(self, arity, acc)

    def zero(self, n: int) -> FreeElement:
        return FreeElement(self, n, {})

    def _check_term(self, t):
        if isinstance(t, int):
            if not self.unital:
                raise FreeError("the exceptional tree needs a unital flavor")
            return
        if self.max_vertices is not None and n_vertices(t) > self.max_vertices:
            raise FreeError("term exceeds the vertex truncation")
        if self.flavor == "may" and not is_may_term(t):
            raise FreeError("term is not a May tree")
        ls = sorted(leaves(t))
        if ls != list(range(1, len(ls) + 1)):
            raise FreeError(f"leaves must be labeled 1..n, got {ls}")

    def generator(self, name: str) -> FreeElement:
        k, b = self.E.find(name)
        return self.corolla(b, k)

    def corolla(self, b: int, k: int) -> FreeElement:
        if not 0 <= b < self.E.dim(k):
            raise FreeError(f"no basis element {b} in E({k})")
        return FreeElement(self, k, {(b, tuple(range(1, k + 1))): Fraction(1)})

    def unit(self) -> FreeElement:
        if not self.unital:
            raise FreeError(f"{self.flavor} flavor has no unit")
        return FreeElement(self, 1, {1: Fraction(1)})

    # -- structure operations ---------------------------------------------------

    def _own(self, f: FreeElement):
        if f.space != self:
            raise FreeError("element belongs to another construction")

    def circ(self, f: FreeElement, i: int, g: FreeElement) -> FreeElement:
        """f o_i g: graft g into the i-th input of f."""
        self._own(f)
        self._own(g)
        if self.flavor == "may":
            raise FreeError("the May flavor has no partial compositions")
        m, n = f.key, g.key
        if not 1 <= i <= m:
            raise FreeError(f"index {i} out of range for arity {m}")
        acc: dict = {}
        for s, a in f.items():
            for t, c in g.items():
                r = _graft(s, i, t, n)
                if self.max_vertices is not None and n_vertices(r) > self.max_vertices:
                    raise FreeError("composite exceeds the vertex truncation")
                add_into(acc, {r: a * c})
        return FreeElement(self, m + n - 1, acc)

    def gamma(self, f: FreeElement, gs: Sequence[FreeElement]) -> FreeElement:
        """Simultaneous grafting of gs[j] into input j+1 of f."""
        self._own(f)
        if len(gs) != f.key:
            raise FreeError(f"gamma needs {f.key} inputs, got {len(gs)}")
        for g in gs:
            self._own(g)
        sizes = [g.key for g in gs]
        offsets = [sum(sizes[:j]) for j in range(len(sizes))]
        acc: dict = {}
        for s, a in f.items():
            for combo in product(*[g.items() for g in gs]):
                coeff = a
                for _, c in combo:
                    coeff *= c
                subs = {j + 1: _shift(t, offsets[j]) for j, (t, _) in enumerate(combo)}
                r = _relabel(s, lambda j: subs[j]) if not isinstance(s, int) else subs[s]
                if self.max_vertices is not None and n_vertices(r) > self.max_vertices:
                    raise FreeError("composite exceeds the vertex truncation")
                add_into(acc, {r: coeff})
        return FreeElement(self, sum(sizes), acc)

    def act(self, f: FreeElement, sigma: Permutation) -> FreeElement:
        """Right action: leaf j becomes leaf sigma^-1(j)."""
        self._own(f)
        if self.planar:
            raise FreeError("non-Sigma elements carry no action")
        if sigma.degree != f.key:
            raise FreeError("permutation degree differs from the arity")
        inv = sigma.inverse()
        acc: dict = {}
        for t, c in f.items():
            add_into(acc, self.canonical(_relabel(t, inv)), c)
        return FreeElement(self, f.key, acc)

    def cyclic_act(self, f: FreeElement, tau: ExtendedPermutation) -> FreeElement:
        """Right Sigma_n^+ action on a cyclic element: leg j becomes leg tau^-1(j)."""
        self._own(f)
        if self.flavor != "cyclic":
            raise FreeError("cyclic action needs the cyclic flavor")
        if tau.degree != f.key:
            raise FreeError("permutation degree differs from the arity")
        inv = tau.inverse()
        acc: dict = {}
        for t, c in f.items():
            add_into(acc, self._reroot(t, inv), c)
        return FreeElement(self, f.key, acc)

    def _reroot(self, t, relabel) -> dict:
        if isinstance(t, int):
            a, b = relabel(0), relabel(t)
            return {(b if a == 0 else a): Fraction(1)}
        # unrooted form: slots per vertex, slot 0 = towards the old root
        slots: list[list] = []
        decs: list[int] = []

        def walk(x, parent_ref):
            v = len(decs)
            decs.append(x[0])
            slots.append([parent_ref])
            for c in x[1]:
                if isinstance(c, int):
                    slots[v].append(("L", relabel(c)))
                else:
                    w = walk(c, ("V", v))
                    slots[v].append(("V", w))
            return v

        walk(t, ("L", relabel(0)))
        start = next(v for v, s in enumerate(slots) if ("L", 0) in s)

        def build(v, parent_ref) -> dict:
            kids = [r for r in slots[v] if r != parent_ref]
            sub = []
            for r in kids:
                if r[0] == "L":
                    sub.append([(r[1], Fraction(1))])
                else:
                    sub.append(list(build(r[1], ("V", v)).items()))
            k = len(kids)
            out: dict = {}
            for combo in product(*sub):
                terms = [x for x, _ in combo]
                coeff = Fraction(1)
                for _, c in combo:
                    coeff *= c
                mins = [min_leaf(x) for x in terms]
                order = sorted(range(k), key=lambda i: mins[i])
                new_slots = [parent_ref] + [kids[i] for i in order]
                vec = transport_vector(self.E, k, {decs[v]: Fraction(1)}, slots[v], new_slots)
                kt = tuple(terms[i] for i in order)
                for b2, c2 in vec.items():
                    add_into(out, {(b2, kt): coeff * c2})
            return out

        return build(start, ("L", 0))

    # -- bases ------------------------------------------------------------------

    def basis(self, n: int) -> list:
        if n in self._basis_cache:
            return self._basis_cache[n]
        if n < 1:
            return []
        shapes: list = []
        if self.planar:
            shapes = list(self._planar_shapes(1, n, self.max_vertices))
        else:
            shapes = [s for s, _ in nested_trees(range(1, n + 1), self.arities, self.max_vertices)]
        out = []
        for s in shapes:
            if isinstance(s, int):
                if self.unital:
                    out.append(s)
                continue
            if self.flavor == "may" and not is_may_term(_decorate_shape(s, None)):
                continue
            for t in self._decorations_of(s):
                out.append(t)
        out.sort(key=repr)
        self._basis_cache[n] = out
        return out

    def _planar_shapes(self, lo: int, hi: int, budget):
        if lo == hi:
            yield lo
        if budget is not None and budget < 1:
            return
        sub = None if budget is None else budget - 1
        for k in self.arities:
            for cuts in _compositions(hi - lo + 1, k):
                bounds, start = [], lo
                for c in cuts:
                    bounds.append((start, start + c - 1))
                    start += c
                yield from self._planar_combine(bounds, sub)

    def _planar_combine(self, bounds, budget):
        def rec(i, acc, used):
            if i == len(bounds):
                yield tuple(acc)
                return
            for s in self._planar_shapes(bounds[i][0], bounds[i][1],
                                         None if budget is None else budget - used):
                rec_used = used + _count_vertices(s)
                if budget is not None and rec_used > budget:
                    continue
                yield from rec(i + 1, acc + [s], rec_used)
        yield from rec(0, [], 0)

    def _decorations_of(self, s):
        if isinstance(s, int):
            yield s
            return
        k = len(s)
        for b in range(self.E.dim(k)):
            for kids in product(*[list(self._decorations_of(c)) for c in s]):
                yield (b, tuple(kids))

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def basis_element(self, t) -> FreeElement:
        return FreeElement(self, self.arity(t), {t: Fraction(1)})

    def to_graph(self, t):
        return tree_to_graph(t, "cyclic" if self.flavor == "cyclic" else "rooted")


def _count_vertices(s) -> int:
    return 0 if isinstance(s, int) else 1 + sum(_count_vertices(c) for c in s)


def _decorate_shape(s, b):
    return s if isinstance(s, int) else (b, tuple(_decorate_shape(c, b) for c in s))


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
