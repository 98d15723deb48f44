"""Independent counts for the multilinear part of the free Lie algebra.

Two routes, neither touching the package:
  * multilinear Lyndon words on the letters 1..n;
  * the rank of all bracket expansions inside the free associative algebra,
    computed with a local Fraction elimination.
"""
from fractions import Fraction
from itertools import permutations


def is_lyndon(word):
    """Strictly smaller than each of its proper suffixes."""
    return all(word < word[i:] for i in range(1, len(word)))


def multilinear_lyndon_count(n):
    return sum(1 for w in permutations(range(1, n + 1)) if is_lyndon(w))


def _bracket_trees(letters):
    """All ordered binary bracketings over an ordered tuple of letters, and
    their permutations: every tree whose leaves are exactly `letters`."""
    if len(letters) == 1:
        yield letters[0]
        return
    first, rest = letters[0], letters[1:]
    # split the letter set into two non-empty halves (the one holding `first` on the left)
    n = len(rest)
    for mask in range(2 ** n):
        left = (first,) + tuple(rest[i] for i in range(n) if mask >> i & 1)
        right = tuple(rest[i] for i in range(n) if not mask >> i & 1)
        if not right:
            continue
        for a in _bracket_trees(left):
            for b in _bracket_trees(right):
                yield (a, b)


def expand(tree):
    """[a, b] = ab - ba in the free associative algebra; {word: coefficient}."""
    if isinstance(tree, int):
        return {(tree,): 1}
    a, b = expand(tree[0]), expand(tree[1])
    out = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, 0) + x * y
            out[v + u] = out.get(v + u, 0) - x * y
    return {w: c for w, c in out.items() if c}


def _rank(rows):
    rows = [dict((k, Fraction(v)) for k, v in r.items()) for r in rows]
    pivots = {}
    rank = 0
    for r in rows:
        r = dict(r)
        for p, prow in pivots.items():
            c = r.get(p)
            if c:
                for k, v in prow.items():
                    nv = r.get(k, 0) - c * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        if r:
            p = min(r)
            c = r[p]
            prow = {k: v / c for k, v in r.items()}
            for q in list(pivots):
                d = pivots[q].get(p)
                if d:
                    pivots[q] = {k: pivots[q].get(k, 0) - d * prow.get(k, 0) for k in set(pivots[q]) | set(prow)}
                    pivots[q] = {k: v for k, v in pivots[q].items() if v}
            pivots[p] = prow
            rank += 1
    return rank


def free_lie_multilinear_dim(n):
    letters = tuple(range(1, n + 1))
    return _rank([expand(t) for t in _bracket_trees(letters)])
