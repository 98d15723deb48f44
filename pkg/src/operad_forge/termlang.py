"""
S-expression term language.

    gen                 generator reference (a basis name of E)
    (id n)              identity on n wires (n = 1 for operads)
    (circ i t u)        partial composition t o_i u
    (gamma t u1 .. uk)  simultaneous composition
    (comp t u ...)      vertical composition, rightmost applied first; for
                        operads (comp t (perm ...)) is the right action and
                        (comp t (xperm ...)) the cyclic action
    (tensor t u ...)    horizontal composition
    (perm p1 .. pk)     permutation, input wire i goes to output p_i
    (xperm p0 .. pk)    extended permutation
    (modcomp i j t u)   modular t o_{i,j} u
    (xi i j t)          contraction of legs i, j
    (sub t u)  (add t u ...)  (scale p/q t)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .perm import ExtendedPermutation, PermError, Permutation

__all__ = ["Term", "TermError", "ParseError", "ProfileError", "parse", "print_term",
           "infer_profile", "evaluate_term", "OPS"]

OPS = {"id", "circ", "gamma", "comp", "tensor", "perm", "xperm", "modcomp", "xi", "sub", "add", "scale"}


class TermError(ValueError):
    pass


class ParseError(TermError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


class ProfileError(TermError):
    pass


@dataclass(frozen=True)
class Term:
    op: str                      # "gen" for generator references
    args: tuple = ()             # ints, Fractions, names or Terms
    pos: tuple[int, int] = (0, 0)

    def __eq__(self, other):
        return isinstance(other, Term) and self.op == other.op and self.args == other.args

    def __hash__(self):
        return hash((self.op, self.args))

    def __str__(self):
        return print_term(self)


_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|([^\s()]+))")


def _tokens(text: str):
    line, col_base, i = 1, 0, 0
    n = len(text)
    while i < n:
        m = _TOKEN.match(text, i)
        if not m:
            break
        ws = text[i:m.start(m.lastindex)] if m.lastindex else text[i:m.end()]
        for k, ch in enumerate(ws):
            if ch == "\n":
                line += 1
                col_base = i + k + 1
        start = m.start(m.lastindex) if m.lastindex else m.end()
        col = start - col_base + 1
        i = m.end()
        if m.group(1) is not None or m.lastindex is None:
            continue
        yield m.group(m.lastindex), line, col


def _atom(tok: str):
    if re.fullmatch(r"-?\d+", tok):
        return int(tok)
    if re.fullmatch(r"-?\d+/\d+", tok):
        return Fraction(tok)
    return tok


def parse(text: str) -> Term:
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty input", 1, 1)
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(toks):
            last = toks[-1]
            raise ParseError("unexpected end of input", last[1], last[2])
        tok, line, col = toks[pos]
        pos += 1
        if tok == ")":
            raise ParseError("unexpected ')'", line, col)
        if tok != "(":
            a = _atom(tok)
            if not isinstance(a, str):
                raise ParseError(f"number {tok} where a term was expected", line, col)
            return Term("gen", (a,), (line, col))
        if pos >= len(toks):
            raise ParseError("unexpected end of input", line, col)
        head, hl, hc = toks[pos]
        pos += 1
        if head not in OPS:
            raise ParseError(f"unknown combinator {head!r}", hl, hc)
        args = []
        while True:
            if pos >= len(toks):
                raise ParseError("missing ')'", line, col)
            tok, l2, c2 = toks[pos]
            if tok == ")":
                pos += 1
                break
            if tok == "(":
                args.append(expr())
            else:
                pos += 1
                a = _atom(tok)
                args.append(Term("gen", (a,), (l2, c2)) if isinstance(a, str) else a)
        return _check_shape(Term(head, tuple(args), (line, col)))

    t = expr()
    if pos != len(toks):
        tok, line, col = toks[pos]
        raise ParseError(f"trailing input {tok!r}", line, col)
    return t


def _check_shape(t: Term) -> Term:
    line, col = t.pos
    a = t.args

    def need(cond, msg):
        if not cond:
            raise ParseError(f"({t.op} ...): {msg}", line, col)

    terms = [x for x in a if isinstance(x, Term)]
    nums = [x for x in a if not isinstance(x, Term)]
    if t.op == "id":
        need(len(a) == 1 and isinstance(a[0], int) and a[0] >= 0, "expects one wire count")
    elif t.op == "circ":
        need(len(a) == 3 and isinstance(a[0], int) and len(terms) == 2, "expects an index and two terms")
    elif t.op in ("gamma", "comp", "tensor", "add"):
        need(len(a) >= 2 and not nums, "expects at least two terms")
    elif t.op in ("perm", "xperm"):
        need(a and all(isinstance(x, int) for x in a), "expects integers")
        try:
            Permutation(tuple(a)) if t.op == "perm" else ExtendedPermutation(tuple(a))
        except PermError as e:
            raise ParseError(str(e), line, col) from None
    elif t.op == "modcomp":
        need(len(a) == 4 and all(isinstance(x, int) for x in a[:2]) and len(terms) == 2,
             "expects two indices and two terms")
    elif t.op == "xi":
        need(len(a) == 3 and all(isinstance(x, int) for x in a[:2]) and len(terms) == 1,
             "expects two indices and a term")
    elif t.op == "sub":
        need(len(a) == 2 and len(terms) == 2, "expects two terms")
    elif t.op == "scale":
        need(len(a) == 2 and isinstance(a[0], (int, Fraction)) and isinstance(a[1], Term),
             "expects a rational and a term")
    return t


def print_term(t: Term) -> str:
    if t.op == "gen":
        return str(t.args[0])
    parts = [t.op]
    for x in t.args:
        parts.append(print_term(x) if isinstance(x, Term) else str(x))
    return "(" + " ".join(parts) + ")"


# -- profiles -------------------------------------------------------------------

def _where(t: Term) -> str:
    return f"{print_term(t)} (line {t.pos[0]}, column {t.pos[1]})"


def infer_profile(t: Term, profiles: Mapping[str, object], flavor: str = "operad"):
    """Arity (int) for operadic flavors, (genus, legs) for modular, (out, in) for PROPs."""
    directed = flavor in ("prop", "properad", "dioperad", "halfprop", "bprop")
    modular = flavor in ("modular", "modular0")

    def go(x):
        op, a = x.op, x.args
        if op == "gen":
            if a[0] not in profiles:
                raise ProfileError(f"unknown generator {a[0]!r} in {_where(x)}")
            return profiles[a[0]]
        if op == "id":
            if directed:
                return (a[0], a[0])
            if a[0] != 1:
                raise ProfileError(f"operadic identity has one input: {_where(x)}")
            return 1
        if op == "perm":
            n = len(a)
            return ("perm", n) if not directed else (n, n)
        if op == "xperm":
            return ("xperm", len(a) - 1)
        if op == "circ":
            i, f, g = a
            pf, pg = go(f), go(g)
            if directed or modular or not isinstance(pf, int) or not isinstance(pg, int):
                raise ProfileError(f"circ needs operadic arguments: {_where(x)}")
            if not 1 <= i <= pf:
                raise ProfileError(f"index {i} exceeds arity {pf} in {_where(x)}")
            return pf + pg - 1
        if op == "gamma":
            pf = go(a[0])
            ps = [go(y) for y in a[1:]]
            if not isinstance(pf, int) or len(ps) != pf:
                raise ProfileError(f"gamma needs {pf} inputs in {_where(x)}")
            return sum(ps)
        if op == "comp":
            ps = [go(y) for y in a]
            if directed:
                cur = ps[-1]
                for p in reversed(ps[:-1]):
                    if p[1] != cur[0]:
                        raise ProfileError(f"profile mismatch {p} after {cur} in {_where(x)}")
                    cur = (p[0], cur[1])
                return cur
            base = ps[0]
            for p in ps[1:]:
                if not (isinstance(p, tuple) and p[0] in ("perm", "xperm")):
                    raise ProfileError(f"operadic comp only takes permutations on the right: {_where(x)}")
                arity = base if isinstance(base, int) else base[1]
                if p[1] != arity:
                    raise ProfileError(f"permutation degree {p[1]} differs from arity {arity} in {_where(x)}")
            return base
        if op == "tensor":
            if not directed:
                raise ProfileError(f"tensor is a PROP combinator: {_where(x)}")
            ps = [go(y) for y in a]
            return (sum(p[0] for p in ps), sum(p[1] for p in ps))
        if op == "modcomp":
            i, j, f, g = a
            (ga, m), (gb, n) = go(f), go(g)
            if not (0 <= i <= m and 0 <= j <= n):
                raise ProfileError(f"leg index out of range in {_where(x)}")
            return (ga + gb, m + n - 1)
        if op == "xi":
            i, j, f = a
            g, m = go(f)
            if i == j or not (0 <= i <= m and 0 <= j <= m):
                raise ProfileError(f"bad contraction legs in {_where(x)}")
            return (g + 1, m - 2)
        if op in ("sub", "add"):
            ps = [go(y) for y in a]
            if any(p != ps[0] for p in ps):
                raise ProfileError(f"summands of different profiles {ps} in {_where(x)}")
            return ps[0]
        if op == "scale":
            return go(a[1])
        raise ProfileError(f"unknown combinator {op}")

    return go(t)


# -- evaluation -----------------------------------------------------------------

def evaluate_term(t: Term, space):
    """Evaluate into a free construction (TreeOperad or GraphConstruction)."""
    from .freecons import GraphConstruction, TreeOperad

    tree = isinstance(space, TreeOperad)
    directed = isinstance(space, GraphConstruction) and space.directed
    if directed and space.flavor != "prop":
        # intermediate composites (e.g. a tensor factor) may leave a restricted
        # family; evaluate in the ambient PROP and restrict the result
        from .freecons import FreeElement, FreeError
        ambient = GraphConstruction(space.E, "prop", space.max_vertices)
        e = evaluate_term(t, ambient)
        for (G, _d) in e.terms:
            if not space._allowed(G):
                raise FreeError(f"{print_term(t)} has a term outside the {space.flavor} family")
        return FreeElement(space, e.key, e.terms)

    def go(x):
        op, a = x.op, x.args
        if op == "gen":
            return space.generator(a[0])
        if op == "id":
            return space.unit() if tree else space.identity(a[0])
        if op == "perm":
            if not directed:
                raise ProfileError(f"a bare permutation is not an operad element: {_where(x)}")
            return space.perm(Permutation(tuple(a)))
        if op == "xperm":
            raise ProfileError(f"a bare extended permutation is not an element: {_where(x)}")
        if op == "circ":
            return space.circ(go(a[1]), a[0], go(a[2]))
        if op == "gamma":
            return space.gamma(go(a[0]), [go(y) for y in a[1:]])
        if op == "comp":
            if directed:
                vals = [go(y) for y in a]
                cur = vals[-1]
                for v in reversed(vals[:-1]):
                    cur = space.compose(v, cur)
                return cur
            cur = go(a[0])
            for p in a[1:]:
                if p.op == "perm":
                    cur = space.act(cur, Permutation(tuple(p.args)))
                elif p.op == "xperm":
                    cur = space.cyclic_act(cur, ExtendedPermutation(tuple(p.args)))
                else:
                    raise ProfileError(f"operadic comp only takes permutations on the right: {_where(x)}")
            return cur
        if op == "tensor":
            vals = [go(y) for y in a]
            cur = vals[0]
            for v in vals[1:]:
                cur = space.tensor(cur, v)
            return cur
        if op == "modcomp":
            return space.modular_compose(go(a[2]), a[0], go(a[3]), a[1])
        if op == "xi":
            return space.contract(go(a[2]), a[0], a[1])
        if op == "sub":
            return go(a[0]) - go(a[1])
        if op == "add":
            vals = [go(y) for y in a]
            cur = vals[0]
            for v in vals[1:]:
                cur = cur + v
            return cur
        if op == "scale":
            return go(a[1]) * a[0]
        raise ProfileError(f"unknown combinator {op}")

    return go(t)
