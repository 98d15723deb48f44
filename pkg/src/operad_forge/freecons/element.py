"""Linear combinations of canonical decorated schemes."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from ..exactla import format_fraction, to_fraction

__all__ = ["FreeError", "FreeElement", "add_into"]


class FreeError(ValueError):
    pass


def add_into(acc: dict, terms: Mapping, scale=1) -> dict:
    for t, c in terms.items():
        v = acc.get(t, 0) + c * scale
        if v:
            acc[t] = v
        else:
            acc.pop(t, None)
    return acc


def _sort_key(item):
    return repr(item[0])


class FreeElement:
    """A finite Q-linear combination of canonical terms of one construction
    (`space`) in one profile (`key`)."""

    __slots__ = ("space", "key", "_terms")

    def __init__(self, space, key: Hashable, terms: Mapping | Iterable = ()):
        self.space = space
        self.key = key
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for t, c in items:
            add_into(acc, {t: to_fraction(c)})
        self._terms = acc

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=_sort_key)

    def coefficient(self, term) -> Fraction:
        return self._terms.get(term, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def _check(self, other: FreeElement):
        if not isinstance(other, FreeElement):
            raise FreeError("can only combine free elements")
        if other.space is not self.space and other.space != self.space:
            raise FreeError("elements live in different free constructions")
        if other.key != self.key:
            raise FreeError(f"profile mismatch {self.key} vs {other.key}")

    def __add__(self, other: FreeElement) -> FreeElement:
        self._check(other)
        return FreeElement(self.space, self.key, add_into(dict(self._terms), other._terms))

    def __sub__(self, other: FreeElement) -> FreeElement:
        self._check(other)
        return FreeElement(self.space, self.key, add_into(dict(self._terms), other._terms, -1))

    def __neg__(self) -> FreeElement:
        return FreeElement(self.space, self.key, {t: -c for t, c in self._terms.items()})

    def __mul__(self, c) -> FreeElement:
        c = to_fraction(c)
        return FreeElement(self.space, self.key, {t: c * v for t, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.key == other.key and self.space == other.space and self._terms == other._terms

    def __hash__(self):
        return hash((self.key, frozenset(self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{format_fraction(c)} * {self.space.format_term(t)}" for t, c in self.items())

    def __repr__(self) -> str:
        return f"FreeElement({self.key!r}: {self})"
