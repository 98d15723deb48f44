"""
Symmetric groups Sigma_n (one-line notation on 1..n) and the extended groups
Sigma_n^+ (one-line notation on 0..n), with the block operations used by the
operad axioms.

Right actions on multilinear maps follow

    (f sigma)(x_1, ..., x_n) = f(x_{sigma^-1(1)}, ..., x_{sigma^-1(n)})

so that (f sigma) tau = f (sigma o tau), where o is composition of maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator, Sequence

__all__ = [
    "PermError", "Permutation", "ExtendedPermutation",
    "compose", "block_permutation", "block_sum", "insert", "cycle",
    "all_permutations", "all_extended", "parse_perm",
]


class PermError(ValueError):
    pass


def _check_bijection(images: tuple[int, ...], lo: int) -> None:
    if sorted(images) != list(range(lo, lo + len(images))):
        raise PermError(f"not a bijection of {{{lo}..{lo + len(images) - 1}}}: {images}")


@dataclass(frozen=True, order=True)
class Permutation:
    """Element of Sigma_n; images[i-1] is the image of i."""
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(x) for x in self.images))
        _check_bijection(self.images, 1)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        im = list(range(1, n + 1))
        im[i - 1], im[j - 1] = j, i
        return cls(tuple(im))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __len__(self) -> int:
        return len(self.images)

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x - 1] = i + 1
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, len(self.images) + 1))

    def sign(self) -> int:
        seen = [False] * len(self.images)
        s = 1
        for i in range(len(self.images)):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = self.images[j] - 1
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    def adjacent_word(self) -> list[int]:
        """Indices k of adjacent transpositions s_k = (k, k+1) with
        self = s_{w[0]} o s_{w[1]} o ... (bubble-sort factorization)."""
        arr = list(self.images)
        word: list[int] = []
        # sort arr by adjacent swaps of positions; each swap at positions
        # (k, k+1) is right multiplication by s_k
        n = len(arr)
        for i in range(n):
            for k in range(n - 1 - i):
                if arr[k] > arr[k + 1]:
                    arr[k], arr[k + 1] = arr[k + 1], arr[k]
                    word.append(k + 1)
        # arr = self o s_{w1} o s_{w2} ... = id, so self = s_{wr} ... s_{w1}
        return word[::-1]

    def to_extended(self) -> ExtendedPermutation:
        return ExtendedPermutation((0,) + self.images)

    def __str__(self) -> str:
        return "perm " + " ".join(map(str, self.images))


@dataclass(frozen=True, order=True)
class ExtendedPermutation:
    """Element of Sigma_n^+, a bijection of {0, ..., n}."""
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(x) for x in self.images))
        if not self.images:
            raise PermError("extended permutation needs at least the symbol 0")
        _check_bijection(self.images, 0)

    @classmethod
    def identity(cls, n: int) -> ExtendedPermutation:
        return cls(tuple(range(n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> ExtendedPermutation:
        im = list(range(n + 1))
        im[i], im[j] = j, i
        return cls(tuple(im))

    @property
    def degree(self) -> int:
        """The n of Sigma_n^+ (one less than the number of symbols)."""
        return len(self.images) - 1

    def __call__(self, i: int) -> int:
        return self.images[i]

    def inverse(self) -> ExtendedPermutation:
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return ExtendedPermutation(tuple(inv))

    def compose(self, other: ExtendedPermutation) -> ExtendedPermutation:
        if len(self.images) != len(other.images):
            raise PermError("degree mismatch")
        return ExtendedPermutation(tuple(self.images[other.images[i]] for i in range(len(self.images))))

    def is_identity(self) -> bool:
        return self.images == tuple(range(len(self.images)))

    def fixes_zero(self) -> bool:
        return self.images[0] == 0

    def restrict(self) -> Permutation:
        """The Sigma_n element of a permutation fixing 0."""
        if not self.fixes_zero():
            raise PermError("does not fix 0")
        return Permutation(self.images[1:])

    def sign(self) -> int:
        return Permutation(tuple(x + 1 for x in self.images)).sign()

    def adjacent_word(self) -> list[int]:
        """Like Permutation.adjacent_word, with s_k = (k, k+1) for k = 0..n-1."""
        return [k - 1 for k in Permutation(tuple(x + 1 for x in self.images)).adjacent_word()]

    def __str__(self) -> str:
        return "xperm " + " ".join(map(str, self.images))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """(a o b)(i) = a(b(i))."""
    if a.degree != b.degree:
        raise PermError(f"degree mismatch: {a.degree} vs {b.degree}")
    return Permutation(tuple(a.images[b.images[i] - 1] for i in range(a.degree)))


def block_permutation(sigma: Permutation, blocks: Sequence[int]) -> Permutation:
    """Move the j-th consecutive block (of size blocks[j-1]) to slot sigma(j),
    keeping the order inside each block.

    With this convention the May equivariance square reads

        gamma(f sigma; h_1..h_n)
            = gamma(f; h_{sigma^-1(1)}, ..., h_{sigma^-1(n)}) . block_permutation(sigma, (|h_1|, ..., |h_n|))
    """
    n = sigma.degree
    if len(blocks) != n:
        raise PermError(f"{n} blocks expected, got {len(blocks)}")
    if any(k < 0 for k in blocks):
        raise PermError("negative block size")
    inv = sigma.inverse()
    # start offset of each target slot, target slot s holds block sigma^-1(s)
    start = {}
    pos = 0
    for s in range(1, n + 1):
        start[s] = pos
        pos += blocks[inv(s) - 1]
    images = []
    for j in range(1, n + 1):
        for r in range(blocks[j - 1]):
            images.append(start[sigma(j)] + r + 1)
    return Permutation(tuple(images))


def block_sum(taus: Iterable[Permutation]) -> Permutation:
    images: list[int] = []
    offset = 0
    for t in taus:
        images.extend(x + offset for x in t.images)
        offset += t.degree
    return Permutation(tuple(images))


def insert(tau: Permutation, i: int, sigma: Permutation) -> Permutation:
    """tau o_i sigma: the permutation with (f tau) o_i (g sigma) = (f o_{tau(i)} g)(tau o_i sigma)."""
    m, n = tau.degree, sigma.degree
    if not 1 <= i <= m:
        raise PermError(f"insertion index {i} outside 1..{m}")
    sizes = [1] * m
    sizes[i - 1] = n
    moved = block_permutation(tau, sizes)
    inner = [Permutation.identity(1)] * m
    inner[tau(i) - 1] = sigma
    return compose(block_sum(inner), moved)


def cycle(n: int) -> ExtendedPermutation:
    """tau_n: 0 -> 1 -> ... -> n -> 0."""
    if n < 0:
        raise PermError("negative degree")
    return ExtendedPermutation(tuple((i + 1) % (n + 1) for i in range(n + 1)))


def all_permutations(n: int) -> Iterator[Permutation]:
    for p in permutations(range(1, n + 1)):
        yield Permutation(p)


def all_extended(n: int) -> Iterator[ExtendedPermutation]:
    for p in permutations(range(n + 1)):
        yield ExtendedPermutation(p)


def parse_perm(text: str) -> Permutation | ExtendedPermutation:
    """Parse "perm 2 1 3" or "xperm 1 2 0"."""
    head, *rest = text.split()
    nums = tuple(int(x) for x in rest)
    if head == "perm":
        return Permutation(nums)
    if head == "xperm":
        return ExtendedPermutation(nums)
    raise PermError(f"unknown permutation tag {head!r}")
