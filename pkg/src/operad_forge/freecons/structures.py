"""
Truncated operad structures as explicit tables, in the partial (o_i) and
the simultaneous (gamma) presentations, with the conversions between them,
unit adjunction and augmentation ideals.

Basis labels are arbitrary hashables; `arity` maps each label to its arity.
Vectors are sparse dicts {label: Fraction}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Hashable, Mapping, Sequence

from .element import FreeError, add_into
from .trees import TreeOperad

__all__ = ["MissingUnitError", "MarklStructure", "MayStructure", "markl_from_free", "may_from_free",
           "may_from_markl", "markl_from_may", "find_markl_obstruction", "counterexample_V",
           "adjoin_unit", "augmentation_ideal", "check_unit_laws", "UNIT"]

UNIT = ("unit",)


class MissingUnitError(FreeError):
    pass


def _bilinear(table: Mapping, u: Mapping, v: Mapping, make_key) -> dict:
    acc: dict = {}
    for x, a in u.items():
        for y, b in v.items():
            add_into(acc, table[make_key(x, y)], a * b)
    return acc


@dataclass
class MarklStructure:
    bound: int
    arity: dict                       # label -> arity
    circ: dict = field(default_factory=dict)   # (x, i, y) -> vector
    unit: Hashable | None = None

    def labels(self, n: int) -> list:
        return sorted((x for x, a in self.arity.items() if a == n), key=repr)

    def compose(self, u: Mapping, i: int, v: Mapping) -> dict:
        return _bilinear(self.circ, u, v, lambda x, y: (x, i, y))


@dataclass
class MayStructure:
    bound: int
    arity: dict
    gamma: dict = field(default_factory=dict)  # (x, (y1, ..., yk)) -> vector
    unit: Hashable | None = None

    def labels(self, n: int) -> list:
        return sorted((x for x, a in self.arity.items() if a == n), key=repr)

    def apply(self, u: Mapping, vs: Sequence[Mapping]) -> dict:
        acc: dict = {}
        for x, a in u.items():
            for combo in product(*[list(v.items()) for v in vs]):
                c = a
                for _, b in combo:
                    c *= b
                add_into(acc, self.gamma[(x, tuple(y for y, _ in combo))], c)
        return acc


def _label(F: TreeOperad, t):
    return UNIT if isinstance(t, int) else t


def _arities(F: TreeOperad, bound: int) -> dict:
    arity = {}
    for n in range(1, bound + 1):
        for t in F.basis(n):
            arity[_label(F, t)] = n
    return arity


def _vec(F: TreeOperad, e) -> dict:
    return {_label(F, t): c for t, c in e.items()}


def _elem(F: TreeOperad, x, n: int):
    return F.basis_element(1 if x == UNIT else x)


def markl_from_free(F: TreeOperad, bound: int) -> MarklStructure:
    """Partial compositions of a free tree operad, truncated at arity `bound`."""
    if F.flavor == "may":
        raise FreeError("the May flavor has no partial compositions")
    arity = _arities(F, bound)
    S = MarklStructure(bound, arity, unit=UNIT if F.unital else None)
    for x, m in arity.items():
        for y, n in arity.items():
            if m + n - 1 > bound:
                continue
            ex, ey = _elem(F, x, m), _elem(F, y, n)
            for i in range(1, m + 1):
                S.circ[(x, i, y)] = _vec(F, F.circ(ex, i, ey))
    return S


def _input_tuples(arity: Mapping, k: int, budget: int):
    by_arity: dict[int, list] = {}
    for x, a in arity.items():
        by_arity.setdefault(a, []).append(x)

    def rec(j, left):
        if j == k:
            yield ()
            return
        for a in sorted(by_arity):
            if a > left - (k - j - 1):
                continue
            for x in sorted(by_arity[a], key=repr):
                for rest in rec(j + 1, left - a):
                    yield (x,) + rest
    yield from rec(0, budget)


def may_from_free(F: TreeOperad, bound: int) -> MayStructure:
    """Simultaneous compositions of a free tree operad, computed by direct grafting."""
    arity = _arities(F, bound)
    S = MayStructure(bound, arity, unit=UNIT if F.unital else None)
    for x, k in arity.items():
        ex = _elem(F, x, k)
        for ys in _input_tuples(arity, k, bound):
            S.gamma[(x, ys)] = _vec(F, F.gamma(ex, [_elem(F, y, arity[y]) for y in ys]))
    return S


def may_from_markl(S: MarklStructure) -> MayStructure:
    """gamma(x; y1..yk) = (...((x o_k yk) o_{k-1} y_{k-1})...) o_1 y1."""
    T = MayStructure(S.bound, dict(S.arity), unit=S.unit)
    for x, k in S.arity.items():
        for ys in _input_tuples(S.arity, k, S.bound):
            v = {x: Fraction(1)}
            for j in range(k, 0, -1):
                v = S.compose(v, j, {ys[j - 1]: Fraction(1)})
            T.gamma[(x, ys)] = v
    return T


def markl_from_may(S: MayStructure) -> MarklStructure:
    """x o_i y = gamma(x; e, ..., e, y, e, ..., e) with y in position i."""
    if S.unit is None:
        raise MissingUnitError("partial compositions need a unit")
    T = MarklStructure(S.bound, dict(S.arity), unit=S.unit)
    for x, m in S.arity.items():
        for y, n in S.arity.items():
            if m + n - 1 > S.bound:
                continue
            for i in range(1, m + 1):
                ys = tuple(y if j == i else S.unit for j in range(1, m + 1))
                T.circ[(x, i, y)] = dict(S.gamma[(x, ys)])
    return T


def find_markl_obstruction(S: MayStructure) -> dict | None:
    """A simultaneous composition that partial compositions cannot produce.

    Any partial structure inducing S satisfies gamma(x; y1..yk) =
    (...(x o_k yk)...) o_1 y1, so a nonzero gamma whose chain passes through an
    arity with no basis elements is impossible.  Returns a witness or None."""
    present = {a for a in S.arity.values()}
    for (x, ys), v in sorted(S.gamma.items(), key=repr):
        if not v:
            continue
        k = len(ys)
        a = k
        for j in range(k, 1, -1):
            a = a - 1 + S.arity[ys[j - 1]]
            if a not in present:
                return {"gamma": (x, ys), "value": dict(v), "vanishing_arity": a,
                        "partial": f"({x} o_{j} {ys[j - 1]})", "reason":
                        f"the partial composite lies in the zero component of arity {a}, "
                        "forcing this gamma to vanish"}
    return None


def counterexample_V() -> MayStructure:
    """V(2) = Q f, V(4) = Q h, all other components zero, the only
    composition gamma(f; f, f) = h, no unit."""
    arity = {"f": 2, "h": 4}
    S = MayStructure(4, arity)
    S.gamma[("f", ("f", "f"))] = {"h": Fraction(1)}
    return S


def check_unit_laws(S: MarklStructure) -> list:
    """Failures of x o_i e = x and e o_1 x = x."""
    if S.unit is None:
        raise MissingUnitError("no unit to check")
    bad = []
    e = S.unit
    for x, m in S.arity.items():
        if S.circ.get((e, 1, x)) != {x: Fraction(1)}:
            bad.append(("left", x))
        for i in range(1, m + 1):
            if S.circ.get((x, i, e)) != {x: Fraction(1)}:
                bad.append(("right", x, i))
    return bad


def adjoin_unit(S: MarklStructure, unit_label: Hashable = UNIT) -> MarklStructure:
    """S(1) + Q e in arity one, everything else unchanged."""
    if S.unit is not None:
        raise FreeError("structure already has a unit")
    if unit_label in S.arity:
        raise FreeError("unit label already in use")
    arity = dict(S.arity)
    arity[unit_label] = 1
    T = MarklStructure(S.bound, arity, dict(S.circ), unit_label)
    for x, m in arity.items():
        for i in range(1, m + 1):
            T.circ[(x, i, unit_label)] = {x: Fraction(1)}
        T.circ[(unit_label, 1, x)] = {x: Fraction(1)}
    return T


def augmentation_ideal(S: MarklStructure) -> MarklStructure:
    """Remove the unit; requires that compositions of non-unit elements never
    involve the unit (the augmentation is multiplicative)."""
    if S.unit is None:
        raise MissingUnitError("not a unital structure")
    e = S.unit
    arity = {x: a for x, a in S.arity.items() if x != e}
    circ = {}
    for (x, i, y), v in S.circ.items():
        if x == e or y == e:
            continue
        if v.get(e):
            raise FreeError(f"not augmented: ({x} o_{i} {y}) involves the unit")
        circ[(x, i, y)] = dict(v)
    return MarklStructure(S.bound, arity, circ, None)
