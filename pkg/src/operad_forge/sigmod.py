"""
Sigma-modules and their relatives over Q, and the decoration spaces they
induce on pasting schemes.

Conventions.  A component is a vector space with a basis; vectors are sparse
dicts {basis index: Fraction}.  Actions are given on generators:

  sigma, nonsigma  right Sigma_n action, generators s1..s(n-1), s_k = (k k+1)
  sigma_plus       right Sigma_n^+ action on {0..n}, generators s0..s(n-1)
  modular          as sigma_plus, on the legs 0..n of a (g, n) component
  bimodule         right Sigma_n on inputs (s1..), left Sigma_m on outputs (l1..)

A matrix A for a right generator s acts on column vectors: v.s = A v.
Omitted generators act trivially.

A decorated vertex is a pair (e, c) where c lists the vertex's flags in slot
order.  Reordering obeys (e, c) ~ (e.sigma, c o sigma) for right actions and
(sigma.e, c) ~ (e, c o sigma) for left actions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Hashable, Mapping, Sequence

from .exactla import format_fraction, identity, matmul, to_fraction
from .pasting import FlagGraph
from .perm import ExtendedPermutation, Permutation, all_permutations, compose

__all__ = [
    "SigmaError", "Component", "SigmaCollection", "DecorationSpace", "FLAVORS",
    "builtin", "decorate", "induced_action", "vertex_profile", "reference_order",
    "transport_vector", "extend_by_sign", "symmetrize_collection", "dual_collection",
    "collection_from_json", "collection_to_json", "BUILTIN_NAMES",
]

FLAVORS = ("sigma", "sigma_plus", "modular", "bimodule", "nonsigma")

Vec = dict  # {index: Fraction}


class SigmaError(ValueError):
    pass


def _mat(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(to_fraction(x) for x in r) for r in rows)


def _apply(m, vec: Vec) -> Vec:
    out: dict[int, Fraction] = {}
    for j, c in vec.items():
        for i in range(len(m)):
            a = m[i][j]
            if a:
                out[i] = out.get(i, 0) + a * c
    return {i: c for i, c in out.items() if c}


@dataclass(frozen=True)
class Component:
    key: Hashable
    dim: int
    basis: tuple[str, ...]
    right: Mapping[int, tuple] = field(default_factory=dict)   # generator index k -> matrix
    left: Mapping[int, tuple] = field(default_factory=dict)

    def _gen(self, table, k):
        m = table.get(k)
        return m if m is not None else None

    def act_right(self, vec: Vec, word: Sequence[int]) -> Vec:
        """vec . (s_{w0} o s_{w1} o ...)."""
        for k in word:
            m = self.right.get(k)
            if m is not None:
                vec = _apply(m, vec)
        return vec

    def act_left(self, vec: Vec, word: Sequence[int]) -> Vec:
        """(s_{w0} o s_{w1} o ...) . vec."""
        for k in reversed(word):
            m = self.left.get(k)
            if m is not None:
                vec = _apply(m, vec)
        return vec

    def matrix_right(self, word: Sequence[int]):
        cols = [self.act_right({j: Fraction(1)}, word) for j in range(self.dim)]
        return [[cols[j].get(i, Fraction(0)) for j in range(self.dim)] for i in range(self.dim)]

    def index(self, name: str) -> int:
        try:
            return self.basis.index(name)
        except ValueError:
            raise SigmaError(f"no basis element {name!r} in component {self.key}") from None


def _right_word(flavor: str, perm) -> list[int]:
    """Generator word for a permutation of the slots of a vertex."""
    if isinstance(perm, ExtendedPermutation):
        return perm.adjacent_word()
    return perm.adjacent_word()


def _n_points(flavor: str, key) -> tuple[int, int]:
    """(number of right generators, first right generator index)."""
    if flavor in ("sigma", "nonsigma"):
        return max(key - 1, 0), 1
    if flavor == "sigma_plus":
        return key, 0
    if flavor == "modular":
        return key[1], 0
    if flavor == "bimodule":
        return max(key[1] - 1, 0), 1
    raise SigmaError(flavor)


def _coxeter_ok(mats: dict[int, tuple], gens: list[int], dim: int) -> str | None:
    I = identity(dim)
    full = {k: [list(r) for r in mats[k]] if k in mats else I for k in gens}
    for k in gens:
        if matmul(full[k], full[k], dim) != I:
            return f"s{k}^2 != 1"
    for a in gens:
        for b in gens:
            if b <= a:
                continue
            ab = matmul(full[a], full[b], dim)
            p = ab
            order = 3 if b == a + 1 else 2
            for _ in range(order - 1):
                p = matmul(p, ab, dim)
            if p != I:
                return f"(s{a} s{b})^{order} != 1"
    return None


@dataclass(frozen=True)
class SigmaCollection:
    flavor: str
    components: Mapping[Hashable, Component]
    name: str = ""

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise SigmaError(f"unknown flavor {self.flavor!r}")
        for key, c in self.components.items():
            if c.key != key:
                raise SigmaError("component key mismatch")
            if len(c.basis) != c.dim:
                raise SigmaError(f"component {key}: {c.dim} basis names expected")
            if self.flavor == "modular":
                g, n = key
                if 2 * g + n - 1 <= 0:
                    raise SigmaError(f"unstable modular component {key}")
            if self.flavor == "nonsigma" and (c.right or c.left):
                raise SigmaError("non-Sigma components carry no action")
            count, first = _n_points(self.flavor, key)
            gens = list(range(first, first + count))
            for k, m in c.right.items():
                if k not in gens or len(m) != c.dim or any(len(r) != c.dim for r in m):
                    raise SigmaError(f"bad right generator s{k} in component {key}")
            err = _coxeter_ok(c.right, gens, c.dim) if c.dim else None
            if err:
                raise SigmaError(f"component {key}: not a representation ({err})")
            if self.flavor == "bimodule":
                lgens = list(range(1, key[0]))
                for k, m in c.left.items():
                    if k not in lgens or len(m) != c.dim:
                        raise SigmaError(f"bad left generator l{k} in component {key}")
                err = _coxeter_ok(c.left, lgens, c.dim) if c.dim else None
                if err:
                    raise SigmaError(f"component {key}: left action not a representation ({err})")

    def __hash__(self):
        return hash((self.flavor, self.name, tuple(sorted(
            (repr(k), c.dim, c.basis, tuple(sorted(c.right.items())), tuple(sorted(c.left.items())))
            for k, c in self.components.items()))))

    def get(self, key) -> Component | None:
        c = self.components.get(key)
        return c if c is not None and c.dim > 0 else None

    def dim(self, key) -> int:
        c = self.get(key)
        return c.dim if c else 0

    def keys(self) -> list:
        return sorted((k for k, c in self.components.items() if c.dim), key=repr)

    def find(self, basis_name: str) -> tuple[Hashable, int]:
        for key, c in self.components.items():
            if basis_name in c.basis:
                return key, c.basis.index(basis_name)
        raise SigmaError(f"unknown generator {basis_name!r}")

    def act(self, key, vec: Vec, perm) -> Vec:
        """Right action of a permutation (Permutation for sigma/bimodule inputs,
        ExtendedPermutation for sigma_plus/modular)."""
        c = self.components[key]
        return c.act_right(dict(vec), perm.adjacent_word())

    def act_left(self, key, vec: Vec, perm: Permutation) -> Vec:
        c = self.components[key]
        return c.act_left(dict(vec), perm.adjacent_word())


# -- builtins -------------------------------------------------------------------

SWAP = ((0, 1), (1, 0))
BUILTIN_NAMES = ("E_Com", "E_Ass", "E_Lie", "E_bialgebra", "E_LieBialgebra", "E_InfBialgebra")


def builtin(name: str) -> SigmaCollection:
    if name == "E_Com":
        comps = {2: Component(2, 1, ("mu",), {1: _mat([[1]])})}
        return SigmaCollection("sigma", comps, name)
    if name == "E_Ass":
        comps = {2: Component(2, 2, ("mu", "mu.s"), {1: _mat(SWAP)})}
        return SigmaCollection("sigma", comps, name)
    if name == "E_Lie":
        comps = {2: Component(2, 1, ("beta",), {1: _mat([[-1]])})}
        return SigmaCollection("sigma", comps, name)
    if name in ("E_bialgebra", "E_InfBialgebra"):
        comps = {(1, 2): Component((1, 2), 2, ("mu", "mu.s"), {1: _mat(SWAP)}),
                 (2, 1): Component((2, 1), 2, ("delta", "s.delta"), {}, {1: _mat(SWAP)})}
        return SigmaCollection("bimodule", comps, name)
    if name == "E_LieBialgebra":
        comps = {(1, 2): Component((1, 2), 1, ("beta",), {1: _mat([[-1]])}),
                 (2, 1): Component((2, 1), 1, ("delta",), {}, {1: _mat([[-1]])})}
        return SigmaCollection("bimodule", comps, name)
    raise SigmaError(f"unknown builtin collection {name!r}")


def extend_by_sign(E: SigmaCollection) -> SigmaCollection:
    """Sigma_2^+ action on an arity-2 Sigma-module through the sign Sigma_2^+ -> Sigma_2:
    odd permutations act as the swap."""
    if E.flavor != "sigma" or set(E.components) - {2}:
        raise SigmaError("sign extension is defined for generators concentrated in arity 2")
    c = E.components[2]
    swap = c.right.get(1, _mat(identity(c.dim)))
    comps = {2: Component(2, c.dim, c.basis, {0: swap, 1: swap})}
    return SigmaCollection("sigma_plus", comps, E.name + "+")


def symmetrize_collection(E: SigmaCollection) -> SigmaCollection:
    """Sigma[E](n) = E(n) (x) Q[Sigma_n] with Sigma_n acting on the right factor."""
    if E.flavor != "nonsigma":
        raise SigmaError("symmetrization needs a non-Sigma collection")
    comps = {}
    for n, c in E.components.items():
        perms = sorted(all_permutations(n))
        pos = {p: i for i, p in enumerate(perms)}
        basis = tuple(f"{b}.{''.join(map(str, p.images))}" for b in c.basis for p in perms)
        dim = len(basis)
        right = {}
        for k in range(1, n):
            s = Permutation.transposition(n, k, k + 1)
            m = [[0] * dim for _ in range(dim)]
            for bi in range(c.dim):
                for p in perms:
                    m[bi * len(perms) + pos[compose(p, s)]][bi * len(perms) + pos[p]] = 1
            right[k] = _mat(m)
        comps[n] = Component(n, dim, basis, right)
    return SigmaCollection("sigma", comps, "Sigma[" + E.name + "]")


def dual_collection(E: SigmaCollection) -> SigmaCollection:
    """E^v = E* (x) sgn in the dual basis: generator matrix becomes -A^T."""
    if E.flavor != "sigma":
        raise SigmaError("dualization implemented for Sigma-modules")
    comps = {}
    for n, c in E.components.items():
        right = {}
        count, first = _n_points("sigma", n)
        for k in range(first, first + count):
            A = c.right.get(k, _mat(identity(c.dim)))
            right[k] = _mat([[-A[j][i] for j in range(c.dim)] for i in range(c.dim)])
        basis = tuple(b + "*" for b in c.basis)
        comps[n] = Component(n, c.dim, basis, right)
    return SigmaCollection("sigma", comps, E.name + "!")


# -- JSON -----------------------------------------------------------------------

def _key_from_json(flavor: str, d: Mapping):
    if flavor == "modular":
        return (int(d["genus"]), int(d["legs"]))
    if flavor == "bimodule":
        return (int(d["out"]), int(d["in"]))
    return int(d["arity"])


def _key_to_json(flavor: str, key) -> dict:
    if flavor == "modular":
        return {"genus": key[0], "legs": key[1]}
    if flavor == "bimodule":
        return {"out": key[0], "in": key[1]}
    return {"arity": key}


def _gen_index(name: str, first: int) -> tuple[str, int]:
    if name == "swap":
        return "right", first if first == 1 else 1
    if name.startswith("s"):
        return "right", int(name[1:])
    if name.startswith("l"):
        return "left", int(name[1:])
    raise SigmaError(f"unknown action generator {name!r}")


def collection_from_json(data) -> SigmaCollection:
    if isinstance(data, str):
        data = json.loads(data)
    flavor = data.get("flavor", "sigma")
    comps = {}
    for cd in data["components"]:
        key = _key_from_json(flavor, cd)
        dim = int(cd["dim"])
        basis = tuple(cd.get("basis") or [f"e{key}_{i}" for i in range(dim)])
        right, left = {}, {}
        for gname, m in (cd.get("action") or {}).items():
            side, k = _gen_index(gname, 1)
            (right if side == "right" else left)[k] = _mat(m)
        comps[key] = Component(key, dim, basis, right, left)
    return SigmaCollection(flavor, comps, data.get("name", ""))


def collection_to_json(E: SigmaCollection) -> dict:
    comps = []
    for key in sorted(E.components, key=repr):
        c = E.components[key]
        d = _key_to_json(E.flavor, key)
        d["dim"] = c.dim
        d["basis"] = list(c.basis)
        act = {f"s{k}": [[format_fraction(x) for x in r] for r in m] for k, m in sorted(c.right.items())}
        act.update({f"l{k}": [[format_fraction(x) for x in r] for r in m] for k, m in sorted(c.left.items())})
        if act:
            d["action"] = act
        comps.append(d)
    return {"flavor": E.flavor, "name": E.name, "components": comps}


# -- decoration spaces ----------------------------------------------------------

_SCHEME_FLAVOR = {"rooted": ("sigma", "nonsigma"), "cyclic": ("sigma_plus",),
                  "modular": ("modular",), "directed": ("bimodule",)}


def reference_order(g: FlagGraph, v: int) -> tuple:
    """Slot order of the flags at v: rooted (in-flags); cyclic/modular (all flags);
    directed ((out-flags), (in-flags)); each sorted by flag index."""
    flags = g.flags_at(v)
    if g.kind == "rooted":
        return tuple(f for f in flags if g.dirs[f] == "in")
    if g.kind == "directed":
        return (tuple(f for f in flags if g.dirs[f] == "out"), tuple(f for f in flags if g.dirs[f] == "in"))
    return tuple(flags)


def vertex_profile(g: FlagGraph, v: int):
    if g.kind == "rooted":
        return sum(1 for f in g.flags_at(v) if g.dirs[f] == "in")
    if g.kind == "cyclic":
        return g.valence(v) - 1
    if g.kind == "modular":
        return (g.genus[v], g.valence(v) - 1)
    if g.kind == "directed":
        return g.biarity(v)
    raise SigmaError(f"no vertex profile for kind {g.kind!r}")


def _slot_perm(old: Sequence[int], new: Sequence[int], plus: bool):
    """rho with old[i] = new[rho(i)] (as a Permutation or ExtendedPermutation)."""
    where = {f: i for i, f in enumerate(new)}
    if plus:
        return ExtendedPermutation(tuple(where[f] for f in old))
    return Permutation(tuple(where[f] + 1 for f in old))


def transport_vector(E: SigmaCollection, key, vec: Vec, old_order, new_order) -> Vec:
    """Re-express a decoration given w.r.t. old_order in terms of new_order
    (both list the same flags)."""
    if E.flavor == "nonsigma":
        if tuple(old_order) != tuple(new_order):
            raise SigmaError("non-Sigma decorations cannot be reordered")
        return dict(vec)
    c = E.components[key]
    if E.flavor == "bimodule":
        (oo, oi), (no, ni) = old_order, new_order
        rho_out = _slot_perm(oo, no, False)
        rho_in = _slot_perm(oi, ni, False)
        v = c.act_left(dict(vec), rho_out.adjacent_word()) if rho_out.degree > 1 else dict(vec)
        return c.act_right(v, rho_in.inverse().adjacent_word()) if rho_in.degree > 1 else v
    plus = E.flavor in ("sigma_plus", "modular")
    rho = _slot_perm(old_order, new_order, plus)
    return c.act_right(dict(vec), rho.inverse().adjacent_word())


@dataclass(frozen=True)
class DecorationSpace:
    scheme: FlagGraph
    E: SigmaCollection
    keys: tuple            # per vertex profile key
    dims: tuple[int, ...]  # per vertex
    orders: tuple          # per vertex reference flag order

    @property
    def dim(self) -> int:
        d = 1
        for x in self.dims:
            d *= x
        return d

    def indices(self):
        return product(*(range(d) for d in self.dims))

    def flat(self, idx: Sequence[int]) -> int:
        k = 0
        for i, d in zip(idx, self.dims):
            k = k * d + i
        return k


def decorate(E: SigmaCollection, scheme: FlagGraph) -> DecorationSpace:
    allowed = _SCHEME_FLAVOR.get(scheme.kind, ())
    if E.flavor not in allowed:
        raise SigmaError(f"{E.flavor} collection cannot decorate a {scheme.kind} scheme")
    keys = tuple(vertex_profile(scheme, v) for v in range(scheme.n_vertices))
    dims = tuple(E.dim(k) for k in keys)
    orders = tuple(reference_order(scheme, v) for v in range(scheme.n_vertices))
    return DecorationSpace(scheme, E, keys, dims, orders)


def _map_order(order, phi):
    if order and isinstance(order[0], tuple):
        return tuple(tuple(phi[f] for f in part) for part in order)
    return tuple(phi[f] for f in order)


def induced_action(E: SigmaCollection, scheme: FlagGraph, phi: Sequence[int]) -> list[list[Fraction]]:
    """Matrix of an automorphism phi (flag bijection of scheme) on the decoration space."""
    D = decorate(E, scheme)
    g = scheme
    for f in range(g.n_flags):
        if g.inv[phi[f]] != phi[g.inv[f]] or g.labels[phi[f]] != g.labels[f]:
            raise SigmaError("not an automorphism")
        if g.dirs is not None and g.dirs[phi[f]] != g.dirs[f]:
            raise SigmaError("not an automorphism")
    vmap = {}
    for f in range(g.n_flags):
        v = g.vertex_of[f]
        if v != -1:
            w = g.vertex_of[phi[f]]
            if vmap.setdefault(v, w) != w:
                raise SigmaError("not an automorphism")
    if g.genus is not None and any(g.genus[v] != g.genus[w] for v, w in vmap.items()):
        raise SigmaError("not an automorphism")
    n = D.dim
    V = g.n_vertices
    # per vertex v: the decoration transport from v's order (moved by phi) to vmap[v]'s order
    per_vertex = []
    for v in range(V):
        w = vmap[v]
        moved = _map_order(D.orders[v], phi)
        per_vertex.append([transport_vector(E, D.keys[v], {b: Fraction(1)}, moved, D.orders[w])
                           for b in range(D.dims[v])])
    M = [[Fraction(0)] * n for _ in range(n)]
    for idx in D.indices():
        col = D.flat(idx)
        # image: factor at w = transported factor of v = vmap^-1(w)
        factors = [None] * V
        for v in range(V):
            factors[vmap[v]] = per_vertex[v][idx[v]]
        terms = [((), Fraction(1))]
        for fac in factors:
            terms = [(t + (b,), c * a) for t, c in terms for b, a in fac.items()]
        for t, c in terms:
            M[D.flat(t)][col] += c
    return M
