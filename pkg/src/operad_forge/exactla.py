"""
Exact linear algebra over Q with fractions.Fraction.

Dense matrices are lists of rows.  For the large sparse spans that show up in
ideal computations there is an incremental echelon builder working on
dict-vectors {column: Fraction}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

__all__ = [
    "LinAlgError", "RationalMatrix", "Subspace", "SparseEchelon",
    "to_fraction", "format_fraction", "row_reduce", "rank", "nullspace",
    "annihilator", "inverse", "invariant_projector", "invariant_projector_rank",
    "generate_group", "matmul", "identity", "matrix_to_json", "matrix_from_json",
]


class LinAlgError(ValueError):
    pass


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise LinAlgError("floats are not accepted; pass a string or integer")
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], cols: int | None = None) -> RationalMatrix:
        entries = tuple(tuple(to_fraction(x) for x in row) for row in data)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise LinAlgError("ragged matrix")
        return cls(len(entries), cols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls.from_rows(identity(n), n)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise LinAlgError("shape mismatch")
        return RationalMatrix.from_rows(matmul(self.entries, other.entries, other.cols), other.cols)

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        return RationalMatrix.from_rows([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def scale(self, c) -> RationalMatrix:
        c = to_fraction(c)
        return RationalMatrix.from_rows([[c * a for a in r] for r in self.entries], self.cols)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]], bcols: int | None = None) -> list[list[Fraction]]:
    if bcols is None:
        bcols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [Fraction(0)] * bcols
        for k, x in enumerate(row):
            if x == 0:
                continue
            bk = b[k]
            for j in range(bcols):
                if bk[j]:
                    acc[j] += x * bk[j]
        out.append(acc)
    return out


def _as_rows(m) -> tuple[list[list[Fraction]], int]:
    if isinstance(m, RationalMatrix):
        return [list(r) for r in m.entries], m.cols
    rows = [[to_fraction(x) for x in r] for r in m]
    return rows, (len(rows[0]) if rows else 0)


@dataclass(frozen=True)
class Subspace:
    """Row space of `basis`, kept in reduced row echelon form."""
    ambient: int
    basis: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...] = field(default=())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vec: Sequence) -> bool:
        v = [to_fraction(x) for x in vec]
        for row, p in zip(self.basis, self.pivots):
            if v[p]:
                c = v[p]
                v = [a - c * b for a, b in zip(v, row)]
        return not any(v)

    def __le__(self, other: Subspace) -> bool:
        return all(other.contains(r) for r in self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def sum(self, other: Subspace) -> Subspace:
        return row_reduce(list(self.basis) + list(other.basis), self.ambient)

    @classmethod
    def full(cls, n: int) -> Subspace:
        return row_reduce(identity(n), n)

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls(n, (), ())


def row_reduce(m, cols: int | None = None) -> Subspace:
    """Reduced row echelon form of the rows of m."""
    rows, c = _as_rows(m)
    if cols is not None:
        c = cols
    rows = [r for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for col in range(c):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][col]
        if lead != 1:
            rows[r] = [x / lead for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return Subspace(c, tuple(tuple(x) for x in rows[:r]), tuple(pivots))


def rank(m) -> int:
    return row_reduce(m).dim


def inverse(m) -> list[list[Fraction]]:
    """Inverse of a square matrix via Gauss-Jordan on [m | I]."""
    rows, c = _as_rows(m)
    n = len(rows)
    if c != n:
        raise LinAlgError("only square matrices have inverses")
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    red = row_reduce(aug, 2 * n)
    if red.dim < n or tuple(red.pivots[:n]) != tuple(range(n)):
        raise LinAlgError("matrix is singular")
    return [list(r[n:]) for r in red.basis[:n]]


def nullspace(m, cols: int | None = None) -> Subspace:
    """{x : m x = 0} as a subspace of Q^cols."""
    rows, c = _as_rows(m)
    if cols is not None:
        c = cols
    red = row_reduce(rows, c)
    free = [j for j in range(c) if j not in red.pivots]
    vecs = []
    for fcol in free:
        v = [Fraction(0)] * c
        v[fcol] = Fraction(1)
        for row, p in zip(red.basis, red.pivots):
            v[p] = -row[fcol]
        vecs.append(v)
    return row_reduce(vecs, c)


def annihilator(s: Subspace, pairing) -> Subspace:
    """{w : v^T P w = 0 for all v in s}."""
    prow, pc = _as_rows(pairing)
    n = s.ambient
    if len(prow) != n or pc != n:
        raise LinAlgError("pairing must be square of the ambient dimension")
    if rank(prow) != n:
        raise LinAlgError("degenerate pairing")
    if not s.basis:
        return Subspace.full(n)
    conds = matmul([list(r) for r in s.basis], prow, n)
    return nullspace(conds, n)


def _key(m: Sequence[Sequence[Fraction]]) -> tuple:
    return tuple(tuple(r) for r in m)


def generate_group(generators: Sequence, limit: int = 50000) -> list[list[list[Fraction]]]:
    """All products of the generator matrices (the finite group they generate)."""
    gens = [_as_rows(g)[0] for g in generators]
    if not gens:
        raise LinAlgError("at least one matrix (possibly the identity) is required")
    n = len(gens[0])
    for g in gens:
        if len(g) != n or rank(g) != n:
            raise LinAlgError("non-invertible action matrix")
    ident = identity(n)
    seen = {_key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = matmul(g, a, n)
                k = _key(b)
                if k not in seen:
                    seen[k] = b
                    nxt.append(b)
                    if len(seen) > limit:
                        raise LinAlgError("group too large or infinite")
        frontier = nxt
    return list(seen.values())


def invariant_projector(actions: Sequence) -> list[list[Fraction]]:
    """(1/|G|) sum_g g over the group generated by `actions`."""
    group = generate_group(actions)
    n = len(group[0])
    acc = [[Fraction(0)] * n for _ in range(n)]
    for g in group:
        for i in range(n):
            for j in range(n):
                if g[i][j]:
                    acc[i][j] += g[i][j]
    size = len(group)
    return [[x / size for x in r] for r in acc]


def invariant_projector_rank(actions: Sequence) -> int:
    """Dimension of the coinvariants (= invariants in characteristic 0)."""
    if actions and len(_as_rows(actions[0])[0]) == 0:
        return 0
    return rank(invariant_projector(actions))


class SparseEchelon:
    """Incrementally maintained echelon basis of dict-vectors.

    Rows are stored with leading coefficient 1 at their pivot; they are not
    back-reduced, which keeps additions cheap."""

    def __init__(self):
        self.rows: dict[Hashable, dict] = {}
        self.order: dict[Hashable, int] = {}

    def _rank_of(self, k) -> int:
        r = self.order.get(k)
        if r is None:
            raise LinAlgError(f"unknown coordinate {k!r}; declare the ambient basis first")
        return r

    def declare(self, keys: Iterable[Hashable]) -> None:
        for k in keys:
            if k not in self.order:
                self.order[k] = len(self.order)

    def reduce(self, vec: Mapping) -> dict:
        import heapq

        v = {k: to_fraction(c) for k, c in vec.items() if c}
        heap = [(self._rank_of(k), k) for k in v]
        heapq.heapify(heap)
        out = {}
        while heap:
            _, k = heapq.heappop(heap)
            c = v.pop(k, None)
            if not c:
                continue
            row = self.rows.get(k)
            if row is None:
                out[k] = c
                continue
            for kk, a in row.items():
                if kk == k:
                    continue
                nv = v.get(kk, 0) - c * a
                if kk not in v:
                    heapq.heappush(heap, (self.order[kk], kk))
                if nv:
                    v[kk] = nv
                else:
                    v[kk] = Fraction(0)
        return out

    def add(self, vec: Mapping) -> bool:
        res = self.reduce(vec)
        if not res:
            return False
        lead = min(res, key=self.order.__getitem__)
        c = res[lead]
        self.rows[lead] = {k: a / c for k, a in res.items()}
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list[dict]:
        return [dict(r) for _, r in sorted(self.rows.items(), key=lambda kv: self.order[kv[0]])]

    def to_subspace(self, coords: Sequence[Hashable]) -> Subspace:
        idx = {k: i for i, k in enumerate(coords)}
        dense = []
        for row in self.rows.values():
            v = [Fraction(0)] * len(coords)
            for k, a in row.items():
                v[idx[k]] = a
            dense.append(v)
        return row_reduce(dense, len(coords))


def matrix_to_json(m) -> str:
    rows, _ = _as_rows(m)
    return json.dumps([[format_fraction(x) for x in r] for r in rows])


def matrix_from_json(text: str) -> RationalMatrix:
    return RationalMatrix.from_rows(json.loads(text))
