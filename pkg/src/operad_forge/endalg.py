"""
Endomorphism structures of a finite-dimensional space V over Q, and checks
that concrete structure maps define an algebra over a presentation.

A multilinear map with m outputs and n inputs is stored as a numpy object
array of Fractions with shape (d,)*m + (d,)*n, outputs first.  As a matrix
it is d^m x d^n with the first slot most significant.  Cyclic and modular
elements are stored as maps with output leg 0; the bilinear form B turns
them into (n+1)-linear forms when the legs have to be treated alike.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .exactla import LinAlgError, format_fraction, inverse, rank, to_fraction
from .freecons import FreeElement, GraphConstruction, TreeOperad
from .pasting import FlagGraph
from .perm import ExtendedPermutation, Permutation, all_extended
from .sigmod import SigmaCollection, reference_order, vertex_profile

__all__ = ["AlgebraError", "FiniteSpace", "StructureMaps", "AlgebraReport", "evaluate",
           "check_algebra", "check_invariant_form", "modular_contract", "to_form", "from_form",
           "end_circ", "end_act", "end_cyclic_act", "end_modcomp", "end_xi", "end_compose",
           "end_tensor", "end_perm", "algebra_from_json", "algebra_to_json", "as_matrix",
           "as_tensor", "zero_map", "cyclic_law_failures"]


class AlgebraError(ValueError):
    pass


def _fr_array(data, shape=None) -> np.ndarray:
    a = np.array([[to_fraction(x) for x in row] for row in data], dtype=object)
    return a.reshape(shape) if shape is not None else a


def as_tensor(matrix, d: int, m: int, n: int) -> np.ndarray:
    rows = [list(r) for r in matrix]
    if len(rows) != d ** m or any(len(r) != d ** n for r in rows):
        raise AlgebraError(f"expected a {d ** m} x {d ** n} matrix for profile ({m},{n})")
    return _fr_array(rows, (d,) * (m + n))


def as_matrix(t: np.ndarray, m: int) -> list[list[Fraction]]:
    d = t.shape[0] if t.ndim else 1
    n = t.ndim - m
    flat = np.asarray(t, dtype=object).reshape(d ** m if t.ndim else 1, d ** n if t.ndim else 1)
    return [[Fraction(x) for x in row] for row in flat]


def zero_map(d: int, m: int, n: int) -> np.ndarray:
    return np.full((d,) * (m + n), Fraction(0), dtype=object)


def _delta(d: int) -> np.ndarray:
    a = zero_map(d, 1, 1)
    for i in range(d):
        a[i, i] = Fraction(1)
    return a


@dataclass
class FiniteSpace:
    dim: int
    form: list | None = None
    basis: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise AlgebraError("dimension must be positive")
        if self.basis is None:
            self.basis = tuple(f"e{i}" for i in range(self.dim))
        if len(self.basis) != self.dim:
            raise AlgebraError("one basis label per dimension")
        if self.form is not None:
            f = [[to_fraction(x) for x in r] for r in self.form]
            if len(f) != self.dim or any(len(r) != self.dim for r in f):
                raise AlgebraError("form must be d x d")
            if any(f[i][j] != f[j][i] for i in range(self.dim) for j in range(self.dim)):
                raise AlgebraError("form must be symmetric")
            self.form = f

    def require_form(self) -> np.ndarray:
        if self.form is None:
            raise AlgebraError("a bilinear form is required")
        if rank(self.form) != self.dim:
            raise AlgebraError("the bilinear form is degenerate")
        return _fr_array(self.form)

    def form_inverse(self) -> np.ndarray:
        self.require_form()
        try:
            return _fr_array(inverse(self.form))
        except LinAlgError as e:
            raise AlgebraError(str(e)) from None

    def label(self, idx: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.basis[i] for i in idx)


# -- operations on End_V ------------------------------------------------------------

def end_act(f: np.ndarray, sigma: Permutation, outputs: int = 1) -> np.ndarray:
    """Right action on inputs: (f sigma)(x_1..x_n) = f(x_{sigma^-1(1)}, ...)."""
    n = f.ndim - outputs
    if sigma.degree != n:
        raise AlgebraError("permutation degree differs from the number of inputs")
    axes = list(range(outputs)) + [outputs + sigma(q + 1) - 1 for q in range(n)]
    return np.transpose(f, axes)


def end_left_act(f: np.ndarray, sigma: Permutation, outputs: int) -> np.ndarray:
    """Left action on outputs: output i of f becomes output sigma(i)."""
    if sigma.degree != outputs:
        raise AlgebraError("permutation degree differs from the number of outputs")
    inv = sigma.inverse()
    axes = [inv(q + 1) - 1 for q in range(outputs)] + list(range(outputs, f.ndim))
    return np.transpose(f, axes)


def to_form(f: np.ndarray, B: np.ndarray) -> np.ndarray:
    """(n+1)-linear form B(v_0, f(v_1..v_n)) of a map with one output."""
    return np.tensordot(B, f, axes=([1], [0]))


def from_form(w: np.ndarray, Binv: np.ndarray) -> np.ndarray:
    return np.tensordot(Binv, w, axes=([1], [0]))


def end_cyclic_act(f: np.ndarray, tau: ExtendedPermutation, V: FiniteSpace) -> np.ndarray:
    """Right Sigma_n^+ action, leg q of the result is leg tau(q) of f."""
    B, Binv = V.require_form(), V.form_inverse()
    if tau.degree != f.ndim - 1:
        raise AlgebraError("permutation degree differs from the arity")
    w = to_form(f, B)
    w = np.transpose(w, [tau(q) for q in range(f.ndim)])
    return from_form(w, Binv)


def end_circ(f: np.ndarray, i: int, g: np.ndarray) -> np.ndarray:
    """(f o_i g)(x_1..) = f(x_1, .., g(x_i, ..), ..)."""
    m, n = f.ndim - 1, g.ndim - 1
    if not 1 <= i <= m:
        raise AlgebraError(f"index {i} out of range for arity {m}")
    t = np.tensordot(f, g, axes=([i], [0]))      # axes: out, f-inputs except i, g-inputs
    order = [0] + list(range(1, i)) + list(range(m, m + n)) + list(range(i, m))
    return np.transpose(t, order)


def end_compose(f: np.ndarray, fm: int, g: np.ndarray, gm: int) -> np.ndarray:
    """f o g (g first) for maps with fm and gm outputs."""
    k = f.ndim - fm
    if k != gm:
        raise AlgebraError("profile mismatch in vertical composition")
    return np.tensordot(f, g, axes=(list(range(fm, fm + k)), list(range(gm))))


def end_tensor(f: np.ndarray, fm: int, g: np.ndarray, gm: int) -> np.ndarray:
    t = np.multiply.outer(f, g)
    gn = g.ndim - gm
    order = (list(range(fm)) + list(range(f.ndim, f.ndim + gm)) + list(range(fm, f.ndim))
             + list(range(f.ndim + gm, f.ndim + gm + gn)))
    return np.transpose(t, order)


def end_perm(sigma: Permutation, d: int) -> np.ndarray:
    """The map sending input wire i to output wire sigma(i)."""
    n = sigma.degree
    t = np.full((d,) * (2 * n), Fraction(0), dtype=object)
    for idx in product(range(d), repeat=n):
        out = [0] * n
        for i in range(n):
            out[sigma(i + 1) - 1] = idx[i]
        t[tuple(out) + idx] = Fraction(1)
    return t


def _trace_pair(w: np.ndarray, a: int, b: int, Binv: np.ndarray) -> np.ndarray:
    t = np.tensordot(w, Binv, axes=([a, b], [0, 1]))
    return t


def end_xi(f: np.ndarray, i: int, j: int, V: FiniteSpace) -> np.ndarray:
    """Contraction of legs i and j (0 = output) of a cyclic/modular element
    against B^-1; the remaining legs keep their order."""
    B, Binv = V.require_form(), V.form_inverse()
    n = f.ndim - 1
    if i == j or not (0 <= i <= n and 0 <= j <= n):
        raise AlgebraError("contraction needs two distinct legs")
    w = _trace_pair(to_form(f, B), i, j, Binv)
    if w.ndim == 0:
        return w
    return from_form(w, Binv)


def end_modcomp(f: np.ndarray, i: int, g: np.ndarray, j: int, V: FiniteSpace) -> np.ndarray:
    """f o_{i,j} g: glue leg i of f to leg j of g.  The legs of the result are
    the legs of f before i, then the legs of g after j, then those of g before
    j, then those of f after i."""
    B, Binv = V.require_form(), V.form_inverse()
    m, n = f.ndim - 1, g.ndim - 1
    wf, wg = to_form(f, B), to_form(g, B)
    t = np.tensordot(wf, Binv, axes=([i], [0]))          # f legs except i, then the glued slot
    t = np.tensordot(t, wg, axes=([m], [j]))              # f legs except i, g legs except j
    f_before = list(range(i))
    f_after = list(range(i, m))
    g_after = [m + l - 1 for l in range(j + 1, n + 1)]
    g_before = [m + l for l in range(j)]
    t = np.transpose(t, f_before + g_after + g_before + f_after)
    return from_form(t, Binv) if t.ndim else t


def modular_contract(w: np.ndarray, pairs: Sequence[tuple[int, int]], V: FiniteSpace) -> np.ndarray:
    """Contract slot pairs of a multilinear form by B^-1 (partial trace)."""
    Binv = V.form_inverse()
    slots = list(range(w.ndim))
    for a, b in pairs:
        if a == b or a not in slots or b not in slots:
            raise AlgebraError(f"slot mismatch in pair ({a}, {b})")
        pa, pb = slots.index(a), slots.index(b)
        w = _trace_pair(w, pa, pb, Binv)
        slots = [s for s in slots if s not in (a, b)]
    return w


# -- structure maps ----------------------------------------------------------------

def _profile_io(E: SigmaCollection, key) -> tuple[int, int]:
    if E.flavor == "bimodule":
        return key
    if E.flavor == "modular":
        return (1, key[1])
    return (1, key)


class StructureMaps:
    """Maps alpha(e) for every basis element e of the generators.  Maps may be
    given for a subset; the rest are derived from the action, and any
    disagreement with the action is recorded in `equivariance_failures`."""

    def __init__(self, E: SigmaCollection, V: FiniteSpace, maps: Mapping[str, object]):
        self.E = E
        self.V = V
        self.tensors: dict = {}
        self.equivariance_failures: list[dict] = []
        known: dict = {}
        names = {}
        for key in E.keys():
            for b, name in enumerate(E.components[key].basis):
                names[name] = (key, b)
        for name, mat in maps.items():
            if name not in names:
                raise AlgebraError(f"no generator named {name!r}")
            key, b = names[name]
            m, n = _profile_io(E, key)
            t = mat if isinstance(mat, np.ndarray) else as_tensor(mat, V.dim, m, n)
            known[(key, b)] = t
        self._derive(known)

    def _gen_act(self, key, side: str, k: int, t: np.ndarray) -> np.ndarray:
        E, V = self.E, self.V
        m, n = _profile_io(E, key)
        if side == "left":
            return end_left_act(t, Permutation.transposition(m, k, k + 1), m)
        if E.flavor in ("sigma_plus", "modular"):
            return end_cyclic_act(t, ExtendedPermutation.transposition(n, k, k + 1), V)
        return end_act(t, Permutation.transposition(n, k, k + 1), m)

    def _generators_of(self, key):
        E = self.E
        m, n = _profile_io(E, key)
        if E.flavor in ("sigma_plus", "modular"):
            gens = [("right", k) for k in range(n)]
        else:
            gens = [("right", k) for k in range(1, n)]
        if E.flavor == "bimodule":
            gens += [("left", k) for k in range(1, m)]
        return gens

    def _derive(self, known: dict):
        E = self.E
        for key in E.keys():
            comp = E.components[key]
            if comp.dim == 0:
                continue
            have = {b: t for (k2, b), t in known.items() if k2 == key}
            if not have:
                continue
            changed = True
            while changed:
                changed = False
                for b in sorted(have):
                    for side, k in self._generators_of(key):
                        vec = (comp.act_left if side == "left" else comp.act_right)({b: Fraction(1)}, [k])
                        value = self._gen_act(key, side, k, have[b])
                        unknown = [j for j in vec if j not in have]
                        if len(unknown) > 1:
                            continue
                        rest = sum((c * have[j] for j, c in vec.items() if j in have),
                                   zero_map(self.V.dim, *_profile_io(E, key)))
                        if not unknown:
                            if not np.array_equal(rest, value):
                                self.equivariance_failures.append(
                                    {"generator": comp.basis[b], "action": f"{'l' if side == 'left' else 's'}{k}"})
                            continue
                        j = unknown[0]
                        have[j] = (value - rest) * (Fraction(1) / vec[j])
                        changed = True
            for b, t in have.items():
                self.tensors[(key, b)] = t
        seen = []
        uniq = []
        for f in self.equivariance_failures:
            if f not in seen:
                seen.append(f)
                uniq.append(f)
        self.equivariance_failures = uniq

    def tensor(self, key, b: int) -> np.ndarray:
        t = self.tensors.get((key, b))
        if t is None:
            name = self.E.components[key].basis[b]
            raise AlgebraError(f"no structure map for generator {name!r}")
        return t


# -- evaluation ---------------------------------------------------------------------

def _eval_tree(t, s: StructureMaps) -> tuple[np.ndarray, list[int]]:
    """Tensor with axes [output, inputs...] and the leaf label of each input axis."""
    d = s.V.dim
    if isinstance(t, int):
        return _delta(d), [t]
    b, kids = t
    k = len(kids)
    cur = s.tensor(k, b)
    labels: list[int] = []
    # contract children from the last to the first so earlier axis numbers stay valid
    pending: list[list[int]] = [None] * k
    for j in range(k - 1, -1, -1):
        c = kids[j]
        if isinstance(c, int):
            pending[j] = [c]
            continue
        sub, sub_labels = _eval_tree(c, s)
        # contract axis 1 + j of cur with axis 0 of sub; move sub's inputs into place
        cur = np.tensordot(cur, sub, axes=([1 + j], [0]))
        nd = cur.ndim
        ns = sub.ndim - 1
        order = list(range(1 + j)) + list(range(nd - ns, nd)) + list(range(1 + j, nd - ns))
        cur = np.transpose(cur, order)
        pending[j] = sub_labels
    for p in pending:
        labels.extend(p)
    return cur, labels


def _tree_value(t, s: StructureMaps) -> np.ndarray:
    cur, labels = _eval_tree(t, s)
    order = [0] + [1 + labels.index(l) for l in sorted(labels)]
    return np.transpose(cur, order)


def _graph_value(G: FlagGraph, decs: Sequence[int], s: StructureMaps, modular: bool) -> np.ndarray:
    """Tensor network evaluation; directed results have axes (outs, ins) by
    label, modular results are forms on legs 0..n."""
    V = s.V
    d = V.dim
    B = V.require_form() if modular else None
    Binv = V.form_inverse() if modular else None
    cur = np.array(Fraction(1), dtype=object)
    slots: list[int] = []                 # flag carried by each axis of cur
    for v in range(G.n_vertices):
        key = vertex_profile(G, v)
        t = s.tensor(key, decs[v])
        order = reference_order(G, v)
        flags = list(order[0]) + list(order[1]) if order and isinstance(order[0], tuple) else list(order)
        if modular:
            t = to_form(t, B)
        # self-loops
        loops = [(f, G.inv[f]) for f in flags if G.inv[f] in flags and G.inv[f] > f]
        for a, b in loops:
            pa, pb = flags.index(a), flags.index(b)
            t = _trace_pair(t, pa, pb, Binv) if modular else np.trace(t, axis1=pa, axis2=pb)
            flags = [f for f in flags if f not in (a, b)]
        # edges to what is already built
        mine, theirs = [], []
        for p, f in enumerate(flags):
            h = G.inv[f]
            if h != f and h in slots:
                mine.append(p)
                theirs.append(slots.index(h))
        if modular and mine:
            # insert B^-1 on each glued pair
            for p in theirs:
                cur = np.moveaxis(np.tensordot(cur, Binv, axes=([p], [0])), -1, p)
        cur = np.tensordot(cur, t, axes=(theirs, mine))
        slots = [f for q, f in enumerate(slots) if q not in theirs] + \
                [f for p, f in enumerate(flags) if p not in mine]
    for a, b in G.bare_wires():
        cur = np.multiply.outer(cur, _delta(d))
        slots += [a, b] if G.labels[a][0] == "out" else [b, a]
    if any(G.labels[f] is None for f in slots):
        raise AlgebraError("graph evaluation left an internal flag open")
    if modular:
        order = sorted(range(len(slots)), key=lambda q: G.labels[slots[q]])
    else:
        order = sorted(range(len(slots)), key=lambda q: (G.labels[slots[q]][0] != "out", G.labels[slots[q]][1]))
    return np.transpose(cur, order) if order else cur


def evaluate(e: FreeElement, s: StructureMaps) -> np.ndarray:
    """The multilinear map of a free element (linear in the element)."""
    F = e.space
    d = s.V.dim
    if isinstance(F, TreeOperad):
        total = zero_map(d, 1, e.key)
        for t, c in e.items():
            total = total + c * _tree_value(t, s)
        return total
    if isinstance(F, GraphConstruction):
        if F.directed:
            m, n = e.key
            total = zero_map(d, m, n)
            for (G, dec), c in e.items():
                total = total + c * _graph_value(G, dec, s, False)
            return total
        g, n = e.key
        total = np.full((d,) * (n + 1), Fraction(0), dtype=object) if n >= 0 else np.array(Fraction(0), dtype=object)
        for (G, dec), c in e.items():
            total = total + c * _graph_value(G, dec, s, True)
        if n < 0:
            return total
        return from_form(total, s.V.form_inverse())
    raise AlgebraError("cannot evaluate elements of this construction")


# -- checks -----------------------------------------------------------------------------

@dataclass
class AlgebraReport:
    passed: bool
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"passed": self.passed, "failures": self.failures}


def _first_nonzero(t: np.ndarray):
    for idx in np.ndindex(t.shape):
        if t[idx] != 0:
            return idx, t[idx]
    return None


def check_algebra(P, s: StructureMaps) -> AlgebraReport:
    """Every relation of P must evaluate to zero and the maps must respect
    the generator actions.  Failures carry a witness input."""
    fails = []
    for f in s.equivariance_failures:
        fails.append({"kind": "equivariance", **f})
    texts = P.relation_texts or [str(r) for r in P.relations]
    for text, r in zip(texts, P.relations):
        val = evaluate(r, s)
        hit = _first_nonzero(val)
        if hit is None:
            continue
        idx, v = hit
        outs = 1 if isinstance(r.key, int) or not P.space.directed else r.key[0]
        if not isinstance(r.key, int) and not P.space.directed:
            outs = 1
        fails.append({"kind": "relation", "relation": text,
                      "output": list(s.V.label(idx[:outs])), "input": list(s.V.label(idx[outs:])),
                      "value": format_fraction(v)})
    return AlgebraReport(not fails, fails)


def check_invariant_form(s: StructureMaps) -> AlgebraReport:
    """Invariance of the (n+1)-linear forms B(v_0, alpha(e)(v_1..v_n)) under
    the extended permutations: B~(e.sigma; v_sigma(0), ..) = B~(e; v).  The
    generators must carry a Sigma_n^+ action (sign-extended if needed).
    For binary generators the report also lists the failing triples of
    B(a.b, c) = B(a, b.c)."""
    V = s.V
    B = V.require_form()
    E = s.E
    if E.flavor != "sigma_plus":
        raise AlgebraError("invariance needs generators with a Sigma^+ action")
    fails = []
    for key in E.keys():
        comp = E.components[key]
        for b in range(comp.dim):
            w = to_form(s.tensor(key, b), B)
            for tau in all_extended(key):
                if tau.is_identity():
                    continue
                img = comp.act_right({b: Fraction(1)}, tau.adjacent_word())
                rhs = sum((c * to_form(s.tensor(key, j), B) for j, c in img.items()),
                          np.full(w.shape, Fraction(0), dtype=object))
                # B~(e.tau; v_tau(0), ...) as a function of v
                lhs_moved = np.transpose(rhs, [tau.inverse()(q) for q in range(key + 1)])
                diff = lhs_moved - w
                hit = _first_nonzero(diff)
                if hit is not None:
                    idx, _ = hit
                    fails.append({"kind": "invariance", "generator": comp.basis[b], "permutation": str(tau),
                                  "input": list(V.label(idx)), "lhs": format_fraction(lhs_moved[idx]),
                                  "rhs": format_fraction(w[idx])})
            if key == 2:
                f = s.tensor(2, b)
                for a, bb, c in product(range(V.dim), repeat=3):
                    ab = f[(slice(None), a, bb)]
                    bc = f[(slice(None), bb, c)]
                    lhs = sum(ab[p] * B[p, c] for p in range(V.dim))
                    rhs = sum(B[a, p] * bc[p] for p in range(V.dim))
                    if lhs != rhs:
                        fails.append({"kind": "frobenius", "generator": comp.basis[b],
                                      "triple": list(V.label((a, bb, c))),
                                      "lhs": format_fraction(lhs), "rhs": format_fraction(rhs)})
    return AlgebraReport(not fails, fails)


def cyclic_law_failures(V: FiniteSpace, max_arity: int = 3) -> list[dict]:
    """Check, on basis maps of End_V, that
    (p o_i q) tau = (q tau) o_n (p tau)   for i = 1,
    (p o_i q) tau = (p tau) o_{i-1} q     for 2 <= i <= m,
    where tau is the cycle 0 -> 1 -> ... -> k -> 0 of the relevant arity."""
    from .perm import cycle
    d = V.dim
    fails = []

    def basis_maps(k):
        for idx in product(range(d), repeat=k + 1):
            t = zero_map(d, 1, k)
            t[idx] = Fraction(1)
            yield idx, t

    for m in range(1, max_arity + 1):
        for n in range(1, max_arity + 2 - m):
            for (pi, p), (qi, q) in product(list(basis_maps(m)), list(basis_maps(n))):
                for i in range(1, m + 1):
                    lhs = end_cyclic_act(end_circ(p, i, q), cycle(m + n - 1), V)
                    if i == 1:
                        rhs = end_circ(end_cyclic_act(q, cycle(n), V), n, end_cyclic_act(p, cycle(m), V))
                    else:
                        rhs = end_circ(end_cyclic_act(p, cycle(m), V), i - 1, q)
                    if not np.array_equal(lhs, rhs):
                        fails.append({"m": m, "n": n, "i": i, "p": pi, "q": qi})
    return fails


# -- JSON -------------------------------------------------------------------------------

def algebra_from_json(data, E: SigmaCollection) -> StructureMaps:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        V = FiniteSpace(int(data["dim"]), data.get("form"), tuple(data["basis"]) if data.get("basis") else None)
        return StructureMaps(E, V, data["maps"])
    except KeyError as e:
        raise AlgebraError(f"algebra JSON lacks {e}") from None


def algebra_to_json(s: StructureMaps, only: Sequence[str] | None = None) -> dict:
    out = {"dim": s.V.dim, "basis": list(s.V.basis)}
    if s.V.form is not None:
        out["form"] = [[format_fraction(x) for x in r] for r in s.V.form]
    maps = {}
    for (key, b), t in sorted(s.tensors.items(), key=repr):
        name = s.E.components[key].basis[b]
        if only is not None and name not in only:
            continue
        m, _ = _profile_io(s.E, key)
        maps[name] = [[format_fraction(x) for x in r] for r in as_matrix(t, m)]
    out["maps"] = maps
    return out
