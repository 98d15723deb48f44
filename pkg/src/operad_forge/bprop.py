"""
The bialgebra PROP B_t generated by a product mu (one output, two inputs)
and a coproduct delta (two outputs, one input) subject to associativity,
coassociativity and

    delta o mu = t * (mu (x) mu) o (1 3 2 4) o (delta (x) delta).

t = 1 gives the bialgebra PROP, t = 0 its half version.  Words are linear
combinations of rigid monomials: directed acyclic graphs whose vertices
have ordered ports and whose legs are labeled, so a monomial has no
automorphisms and a depth-first numbering from the outputs is canonical.

Normal forms have every delta below every mu, with left combs on both sides
and a permutation in between:

    (mu^[a1] (x) ... (x) mu^[am]) o sigma o (delta^[b1] (x) ... (x) delta^[bn])
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .exactla import format_fraction, to_fraction
from .perm import Permutation
from .termlang import Term, parse

__all__ = ["BPropError", "BudgetExceeded", "Monomial", "PropWord", "EENormalForm", "normalize",
           "equal_in_B", "graded_dim_B", "ee_count", "confluence_check", "random_monomial",
           "enumerate_monomials", "word_from_term", "word_from_text", "redexes", "rewrite_at",
           "is_normal", "ee_form", "format_word", "ConfluenceReport"]

MU, DELTA = "m", "d"
IN = -1


class BPropError(ValueError):
    pass


class BudgetExceeded(BPropError):
    pass


# A source is (IN, j) for input leg j (0-based) or (v, port) for an output port of vertex v.

@dataclass(frozen=True)
class Monomial:
    n_in: int
    kinds: tuple[str, ...]
    srcs: tuple[tuple[tuple[int, int], ...], ...]
    outs: tuple[tuple[int, int], ...]

    @property
    def profile(self) -> tuple[int, int]:
        return (len(self.outs), self.n_in)

    @property
    def n_vertices(self) -> int:
        return len(self.kinds)

    def __str__(self):
        parts = []
        for v, (k, s) in enumerate(zip(self.kinds, self.srcs)):
            parts.append(f"{v}:{'mu' if k == MU else 'delta'}{_fmt_srcs(s)}")
        return f"[{' '.join(parts)} -> {_fmt_srcs(self.outs)}]"


def _fmt_src(s) -> str:
    return f"in{s[1] + 1}" if s[0] == IN else f"{s[0]}.{s[1]}"


def _fmt_srcs(ss) -> str:
    return "(" + ",".join(_fmt_src(s) for s in ss) + ")"


def canonical(n_in: int, kinds: Sequence[str], srcs: Sequence[Sequence], outs: Sequence) -> Monomial:
    """Renumber vertices in depth-first preorder from the output legs."""
    new_id: dict[int, int] = {}
    order: list[int] = []
    stack = [s[0] for s in reversed(outs) if s[0] != IN]
    while stack:
        v = stack.pop()
        if v in new_id:
            continue
        new_id[v] = len(order)
        order.append(v)
        for s in reversed(srcs[v]):
            if s[0] != IN and s[0] not in new_id:
                stack.append(s[0])
    if len(order) != len(kinds):
        raise BPropError("a vertex does not reach any output")

    def rm(s):
        return s if s[0] == IN else (new_id[s[0]], s[1])

    return Monomial(n_in, tuple(kinds[v] for v in order),
                    tuple(tuple(rm(s) for s in srcs[v]) for v in order),
                    tuple(rm(s) for s in outs))


def _check(mono: Monomial) -> Monomial:
    used = set()
    for v, (k, ss) in enumerate(zip(mono.kinds, mono.srcs)):
        if len(ss) != (2 if k == MU else 1):
            raise BPropError("wrong number of inputs at a vertex")
        for s in ss:
            if s in used:
                raise BPropError("a wire end is used twice")
            used.add(s)
    for s in mono.outs:
        if s in used:
            raise BPropError("a wire end is used twice")
        used.add(s)
    need = {(IN, j) for j in range(mono.n_in)}
    for v, k in enumerate(mono.kinds):
        need |= {(v, 0)} if k == MU else {(v, 0), (v, 1)}
    if used != need:
        raise BPropError("dangling or unknown wire ends")
    return mono


class _Mutable:
    """Editable copy of a monomial for rewriting."""

    def __init__(self, mono: Monomial):
        self.n_in = mono.n_in
        self.kinds = list(mono.kinds)
        self.srcs = [list(s) for s in mono.srcs]
        self.outs = list(mono.outs)

    def consumer(self, src):
        for v, ss in enumerate(self.srcs):
            for p, s in enumerate(ss):
                if s == src:
                    return ("v", v, p)
        return ("o", self.outs.index(src), 0)

    def set_source(self, cons, src):
        if cons[0] == "v":
            self.srcs[cons[1]][cons[2]] = src
        else:
            self.outs[cons[1]] = src

    def add(self, kind, srcs) -> int:
        self.kinds.append(kind)
        self.srcs.append(list(srcs))
        return len(self.kinds) - 1

    def freeze(self, drop: Iterable[int] = ()) -> Monomial:
        drop = set(drop)
        keep = [v for v in range(len(self.kinds)) if v not in drop]
        idx = {v: i for i, v in enumerate(keep)}

        def rm(s):
            return s if s[0] == IN else (idx[s[0]], s[1])

        return canonical(self.n_in, [self.kinds[v] for v in keep],
                         [[rm(s) for s in self.srcs[v]] for v in keep], [rm(s) for s in self.outs])


# -- constructors ------------------------------------------------------------------

def identity(n: int) -> Monomial:
    return Monomial(n, (), (), tuple((IN, j) for j in range(n)))


def perm_monomial(sigma: Permutation) -> Monomial:
    """Input wire i goes to output sigma(i)."""
    outs = [None] * sigma.degree
    for i in range(sigma.degree):
        outs[sigma(i + 1) - 1] = (IN, i)
    return Monomial(sigma.degree, (), (), tuple(outs))


def mu() -> Monomial:
    return Monomial(2, (MU,), (((IN, 0), (IN, 1)),), ((0, 0),))


def delta() -> Monomial:
    return Monomial(1, (DELTA,), (((IN, 0),),), ((0, 0), (0, 1)))


def compose_monomials(f: Monomial, g: Monomial) -> Monomial:
    """f o g: the outputs of g feed the inputs of f."""
    if f.n_in != len(g.outs):
        raise BPropError(f"profile mismatch: {f.profile} after {g.profile}")
    off = g.n_vertices

    def lift(s):
        if s[0] == IN:
            return g.outs[s[1]]
        return (s[0] + off, s[1])

    kinds = list(g.kinds) + list(f.kinds)
    srcs = [list(s) for s in g.srcs] + [[lift(s) for s in ss] for ss in f.srcs]
    outs = [lift(s) for s in f.outs]
    return canonical(g.n_in, kinds, srcs, outs)


def tensor_monomials(f: Monomial, g: Monomial) -> Monomial:
    off = f.n_vertices

    def lift(s):
        return (IN, s[1] + f.n_in) if s[0] == IN else (s[0] + off, s[1])

    kinds = list(f.kinds) + list(g.kinds)
    srcs = [list(s) for s in f.srcs] + [[lift(s) for s in ss] for ss in g.srcs]
    outs = list(f.outs) + [lift(s) for s in g.outs]
    return canonical(f.n_in + g.n_in, kinds, srcs, outs)


class PropWord:
    """A finite Q-combination of monomials of one profile."""

    __slots__ = ("profile", "terms")

    def __init__(self, profile: tuple[int, int], terms: Mapping | None = None):
        self.profile = tuple(profile)
        acc: dict = {}
        for mono, c in (terms or {}).items():
            if mono.profile != self.profile:
                raise BPropError(f"monomial of profile {mono.profile} in a word of profile {profile}")
            c = to_fraction(c)
            v = acc.get(mono, 0) + c
            if v:
                acc[mono] = v
            else:
                acc.pop(mono, None)
        self.terms = acc

    @classmethod
    def of(cls, mono: Monomial, c=1) -> PropWord:
        return cls(mono.profile, {mono: c})

    def is_zero(self) -> bool:
        return not self.terms

    def _same(self, other: PropWord):
        if other.profile != self.profile:
            raise BPropError(f"profile mismatch {self.profile} vs {other.profile}")

    def __add__(self, other: PropWord) -> PropWord:
        self._same(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc.get(k, 0) + c
        return PropWord(self.profile, acc)

    def __sub__(self, other: PropWord) -> PropWord:
        return self + other * -1

    def __mul__(self, c) -> PropWord:
        c = to_fraction(c)
        return PropWord(self.profile, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PropWord) and self.profile == other.profile and self.terms == other.terms

    def __hash__(self):
        return hash((self.profile, frozenset(self.terms.items())))

    def compose(self, other: PropWord) -> PropWord:
        acc: dict = {}
        for f, a in self.terms.items():
            for g, b in other.terms.items():
                k = compose_monomials(f, g)
                acc[k] = acc.get(k, 0) + a * b
        return PropWord((self.profile[0], other.profile[1]), acc)

    def tensor(self, other: PropWord) -> PropWord:
        acc: dict = {}
        for f, a in self.terms.items():
            for g, b in other.terms.items():
                k = tensor_monomials(f, g)
                acc[k] = acc.get(k, 0) + a * b
        return PropWord((self.profile[0] + other.profile[0], self.profile[1] + other.profile[1]), acc)

    @property
    def n_vertices(self) -> int:
        return max((m.n_vertices for m in self.terms), default=0)

    def __repr__(self):
        return f"PropWord{self.profile}({format_word(self)})"


# -- term language -------------------------------------------------------------------

def word_from_term(t: Term) -> PropWord:
    op, a = t.op, t.args
    if op == "gen":
        name = a[0]
        if name == "mu":
            return PropWord.of(mu())
        if name == "delta":
            return PropWord.of(delta())
        if name == "mu.s":
            return PropWord.of(compose_monomials(mu(), perm_monomial(Permutation((2, 1)))))
        if name == "s.delta":
            return PropWord.of(compose_monomials(perm_monomial(Permutation((2, 1))), delta()))
        raise BPropError(f"unknown generator {name!r}; B is generated by mu and delta")
    if op == "id":
        return PropWord.of(identity(a[0]))
    if op == "perm":
        return PropWord.of(perm_monomial(Permutation(tuple(a))))
    if op == "comp":
        ws = [word_from_term(x) for x in a]
        cur = ws[-1]
        for w in reversed(ws[:-1]):
            if w.profile[1] != cur.profile[0]:
                raise BPropError(f"profile mismatch {w.profile} after {cur.profile} in {t}")
            cur = w.compose(cur)
        return cur
    if op == "tensor":
        ws = [word_from_term(x) for x in a]
        cur = ws[0]
        for w in ws[1:]:
            cur = cur.tensor(w)
        return cur
    if op in ("sub", "add"):
        ws = [word_from_term(x) for x in a]
        cur = ws[0]
        for w in ws[1:]:
            if w.profile != cur.profile:
                raise BPropError(f"summands of different profiles in {t}")
            cur = cur - w if op == "sub" else cur + w
        return cur
    if op == "scale":
        return word_from_term(a[1]) * a[0]
    raise BPropError(f"{op} is not a PROP combinator")


def word_from_text(text: str) -> PropWord:
    return word_from_term(parse(text))


# -- rewriting -----------------------------------------------------------------------

def redexes(mono: Monomial) -> list[tuple[str, int, int]]:
    """(rule, lower vertex, upper vertex) for every redex, in vertex order."""
    out = []
    for v, (k, ss) in enumerate(zip(mono.kinds, mono.srcs)):
        if k == DELTA:
            u, p = ss[0]
            if u != IN and mono.kinds[u] == MU:
                out.append(("bialgebra", u, v))
            elif u != IN and mono.kinds[u] == DELTA and p == 1:
                out.append(("coassoc", u, v))
        else:
            u, p = ss[1]
            if u != IN and mono.kinds[u] == MU:
                out.append(("assoc", u, v))
    return out


def is_normal(mono: Monomial) -> bool:
    return not redexes(mono)


def rewrite_at(mono: Monomial, redex: tuple[str, int, int], t: Fraction) -> dict:
    rule, u, v = redex
    M = _Mutable(mono)
    if rule == "assoc":
        # mu(x, mu(y, z)) -> mu(mu(x, y), z); v is the upper vertex
        x = M.srcs[v][0]
        y, z = M.srcs[u]
        M.srcs[u] = [x, y]
        M.srcs[v] = [(u, 0), z]
        return {M.freeze(): Fraction(1)}
    if rule == "coassoc":
        # (1 (x) delta) delta -> (delta (x) 1) delta; u lower, v fed by u's second output
        a = M.consumer((u, 0))
        b = M.consumer((v, 0))
        c = M.consumer((v, 1))
        M.srcs[v] = [(u, 0)]
        M.set_source(a, (v, 0))
        M.set_source(b, (v, 1))
        M.set_source(c, (u, 1))
        return {M.freeze(): Fraction(1)}
    if rule == "bialgebra":
        if t == 0:
            return {}
        x, y = M.srcs[u]
        c0 = M.consumer((v, 0))
        c1 = M.consumer((v, 1))
        da = M.add(DELTA, [x])
        db = M.add(DELTA, [y])
        m1 = M.add(MU, [(da, 0), (db, 0)])
        m2 = M.add(MU, [(da, 1), (db, 1)])
        M.set_source(c0, (m1, 0))
        M.set_source(c1, (m2, 0))
        return {M.freeze(drop=(u, v)): Fraction(t)}
    raise BPropError(f"unknown rule {rule}")


class _Normalizer:
    def __init__(self, t: Fraction):
        self.t = t
        self.memo: dict[Monomial, dict] = {}
        self.lock = threading.Lock()

    def normal_form(self, mono: Monomial, budget: list[int]) -> dict:
        memo = self.memo
        if mono in memo:
            return memo[mono]
        stack = [mono]
        pending: dict = {}
        while stack:
            x = stack[-1]
            if x in memo:
                stack.pop()
                continue
            kids = pending.get(x)
            if kids is None:
                rs = redexes(x)
                if not rs:
                    memo[x] = {x: Fraction(1)}
                    stack.pop()
                    continue
                budget[0] -= 1
                if budget[0] < 0:
                    raise BudgetExceeded("rewrite step budget exhausted")
                kids = rewrite_at(x, rs[0], self.t)
                pending[x] = kids
                for k in kids:
                    if k in pending and k not in memo:
                        raise BPropError("rewriting cycle detected")
                    if k not in memo:
                        stack.append(k)
                continue
            missing = [k for k in kids if k not in memo]
            if missing:
                for k in missing:
                    if k in pending:
                        raise BPropError("rewriting cycle detected")
                    stack.append(k)
                continue
            acc: dict = {}
            for k, c in kids.items():
                for nf, a in memo[k].items():
                    v = acc.get(nf, 0) + c * a
                    if v:
                        acc[nf] = v
                    else:
                        acc.pop(nf, None)
            memo[x] = acc
            del pending[x]
            stack.pop()
        return memo[mono]


_NORMALIZERS: dict[Fraction, _Normalizer] = {}
_NLOCK = threading.Lock()


def _normalizer(t) -> _Normalizer:
    t = to_fraction(t)
    with _NLOCK:
        n = _NORMALIZERS.get(t)
        if n is None:
            n = _NORMALIZERS[t] = _Normalizer(t)
        return n


def step_budget(n_vertices: int) -> int:
    return 10 * 4 ** n_vertices


def normalize(w, t=1) -> PropWord:
    """Normal form of a word (or monomial) in B_t."""
    if isinstance(w, Monomial):
        w = PropWord.of(w)
    N = _normalizer(t)
    budget = [step_budget(w.n_vertices)]
    acc: dict = {}
    with N.lock:
        for mono, c in w.terms.items():
            for nf, a in N.normal_form(mono, budget).items():
                acc[nf] = acc.get(nf, 0) + c * a
    return PropWord(w.profile, acc)


def equal_in_B(u: PropWord, v: PropWord, t=1) -> bool:
    if u.profile != v.profile:
        raise BPropError("words of different profiles")
    return normalize(u - v, t).is_zero()


# -- EE normal forms -----------------------------------------------------------------

@dataclass(frozen=True)
class EENormalForm:
    m: int
    n: int
    N: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    sigma: Permutation

    def __str__(self):
        return (f"mu[{','.join(map(str, self.a))}]|perm {' '.join(map(str, self.sigma.images))}"
                f"|delta[{','.join(map(str, self.b))}]")

    def to_monomial(self) -> Monomial:
        top = [_mu_comb(k) for k in self.a]
        bottom = [_delta_comb(k) for k in self.b]
        cur_top = top[0]
        for x in top[1:]:
            cur_top = tensor_monomials(cur_top, x)
        cur_bot = bottom[0]
        for x in bottom[1:]:
            cur_bot = tensor_monomials(cur_bot, x)
        return compose_monomials(compose_monomials(cur_top, perm_monomial(self.sigma)), cur_bot)


def _mu_comb(k: int) -> Monomial:
    cur = identity(1)
    for j in range(2, k + 1):
        # mu o (cur (x) id)
        cur = compose_monomials(mu(), tensor_monomials(cur, identity(1)))
    return cur


def _delta_comb(k: int) -> Monomial:
    cur = identity(1)
    for j in range(2, k + 1):
        cur = compose_monomials(tensor_monomials(cur, identity(1)), delta())
    return cur


def ee_form(mono: Monomial) -> EENormalForm:
    if not is_normal(mono):
        raise BPropError("monomial is not in normal form")
    consumers: dict = {}
    for v, ss in enumerate(mono.srcs):
        for p, s in enumerate(ss):
            consumers[s] = (v, p)

    def top_leaves(s):
        if s[0] != IN and mono.kinds[s[0]] == MU:
            x, y = mono.srcs[s[0]]
            return top_leaves(x) + top_leaves(y)
        return [s]

    def bottom_ends(s):
        c = consumers.get(s)
        if c is not None and mono.kinds[c[0]] == DELTA:
            return bottom_ends((c[0], 0)) + bottom_ends((c[0], 1))
        return [s]

    a, top = [], []
    for s in mono.outs:
        ls = top_leaves(s)
        a.append(len(ls))
        top.extend(ls)
    b, bottom = [], []
    for j in range(mono.n_in):
        es = bottom_ends((IN, j))
        b.append(len(es))
        bottom.extend(es)
    pos = {s: i + 1 for i, s in enumerate(top)}
    sigma = Permutation(tuple(pos[s] for s in bottom))
    return EENormalForm(len(mono.outs), mono.n_in, len(top), tuple(a), tuple(b), sigma)


def format_word(w: PropWord) -> str:
    """Normal forms as 'c * mu[..]|perm ..|delta[..]' joined by ' + ', or '0'."""
    if w.is_zero():
        return "0"
    parts = []
    for mono, c in w.terms.items():
        body = str(ee_form(mono)) if is_normal(mono) else str(mono)
        parts.append((body, c))
    parts.sort()
    return " + ".join(body if c == 1 else f"{format_fraction(c)} * {body}" for body, c in parts)


def ee_count(m: int, n: int, N: int) -> int:
    """C(N-1, m-1) C(N-1, n-1) N!"""
    if m < 1 or n < 1 or N < max(m, n):
        return 0
    return comb(N - 1, m - 1) * comb(N - 1, n - 1) * factorial(N)


# -- enumeration -----------------------------------------------------------------------

def _open_canonical(n_in, kinds, srcs, opens) -> tuple:
    """Canonical key of a partial monomial whose open wires are unordered."""
    best = None
    for order in set(permutations(opens)):
        key = canonical(n_in, kinds, srcs, list(order))
        if best is None or repr(key) < repr(best):
            best = key
    return best


def enumerate_monomials(m: int, n: int, max_vertices: int, connected_inputs: bool = False) -> list[Monomial]:
    """All monomials of profile (m, n) with at most max_vertices vertices."""
    results: set = set()
    start = (tuple(), tuple(), tuple((IN, j) for j in range(n)))
    frontier = {None: start}
    seen = set()
    for depth in range(max_vertices + 1):
        nxt = {}
        for kinds, srcs, opens in frontier.values():
            if len(opens) == m:
                for order in permutations(opens):
                    results.add(canonical(n, kinds, srcs, list(order)))
            if depth == max_vertices:
                continue
            remaining = max_vertices - depth - 1
            v = len(kinds)
            choices = []
            for i, s in enumerate(opens):
                rest = opens[:i] + opens[i + 1:]
                choices.append((DELTA, (s,), rest + ((v, 0), (v, 1))))
            for i, s in enumerate(opens):
                for j, r in enumerate(opens):
                    if i != j:
                        rest = tuple(x for k, x in enumerate(opens) if k not in (i, j))
                        choices.append((MU, (s, r), rest + ((v, 0),)))
            for kind, ss, new_open in choices:
                if abs(len(new_open) - m) > remaining:
                    continue
                k2 = kinds + (kind,)
                s2 = srcs + (ss,)
                key = _open_canonical(n, k2, s2, new_open)
                if key in seen:
                    continue
                seen.add(key)
                nxt[key] = (k2, s2, new_open)
        frontier = nxt
    out = sorted(results, key=repr)
    if connected_inputs:
        out = [x for x in out if all(s[0] != IN for s in x.outs)]
    return out


def random_monomial(rng: random.Random, max_vertices: int = 6, max_inputs: int = 3) -> Monomial:
    """A random monomial: grow vertices on random open wires, then read the
    open wires off in a random order."""
    n = rng.randint(1, max_inputs)
    kinds, srcs = [], []
    opens = [(IN, j) for j in range(n)]
    for v in range(rng.randint(0, max_vertices)):
        if len(opens) >= 2 and rng.random() < 0.5:
            i, j = rng.sample(range(len(opens)), 2)
            a, b = opens[i], opens[j]
            opens = [x for k, x in enumerate(opens) if k not in (i, j)] + [(v, 0)]
            kinds.append(MU)
            srcs.append((a, b))
        else:
            i = rng.randrange(len(opens))
            a = opens.pop(i)
            opens += [(v, 0), (v, 1)]
            kinds.append(DELTA)
            srcs.append((a,))
    rng.shuffle(opens)
    return canonical(n, kinds, srcs, opens)


# -- oracle-gated dimensions and confluence -------------------------------------------

def graded_dim_B(m: int, n: int, N: int, max_vertices: int | None = None) -> int:
    """EE count for level N, returned only when exhaustive rewriting agrees:
    every monomial of profile (m, n) up to the vertex bound is normalized and
    the distinct normal monomials of level N are counted."""
    if m < 1 or n < 1 or N < max(m, n):
        raise BPropError("need m, n >= 1 and N >= max(m, n)")
    bound = max_vertices if max_vertices is not None else 2 * N
    found = set()
    for mono in enumerate_monomials(m, n, bound):
        for nf in normalize(mono, 1).terms:
            e = ee_form(nf)
            if e.N == N:
                found.add(nf)
    claimed = ee_count(m, n, N)
    if len(found) != claimed:
        raise BPropError(f"oracle found {len(found)} normal forms at level {N}, formula gives {claimed}")
    return claimed


@dataclass
class ConfluenceReport:
    t: Fraction
    bound: int
    monomials: int
    overlaps: int
    unjoinable: list

    @property
    def joinable(self) -> bool:
        return not self.unjoinable


def confluence_check(bound: int = 4, t=1, profiles: Sequence[tuple[int, int]] | None = None) -> ConfluenceReport:
    """Every pair of overlapping redexes (sharing a vertex) in every monomial
    with at most `bound` vertices must rewrite to a common normal form.

    The default profiles are those with at most five legs; every minimal
    overlap of two redex patterns (three vertices) lives in one of them."""
    t = to_fraction(t)
    if profiles is None:
        profiles = [(m, n) for m in range(1, 5) for n in range(1, 5) if m + n <= 5]
    count = overlaps = 0
    bad = []
    for m, n in profiles:
        for mono in enumerate_monomials(m, n, bound):
            count += 1
            rs = redexes(mono)
            for i in range(len(rs)):
                for j in range(i + 1, len(rs)):
                    if not set(rs[i][1:]) & set(rs[j][1:]):
                        continue
                    overlaps += 1
                    left = normalize(PropWord(mono.profile, rewrite_at(mono, rs[i], t)), t)
                    right = normalize(PropWord(mono.profile, rewrite_at(mono, rs[j], t)), t)
                    if left != right:
                        bad.append((str(mono), rs[i], rs[j]))
    return ConfluenceReport(t, bound, count, overlaps, bad)
