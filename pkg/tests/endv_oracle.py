"""Loop-based End_V on small V, written independently of the package.

A map f: V^n -> V is a dict {(o, x1..xn): Fraction}; missing keys are zero.
"""
from fractions import Fraction
from itertools import product


def random_map(d, n, rng, lo=-3, hi=3):
    return {(o,) + xs: Fraction(rng.randint(lo, hi))
            for o in range(d) for xs in product(range(d), repeat=n)}


def act(f, d, n, sigma):
    """(f sigma)(x_1..x_n) = f(x_{sigma^-1(1)}, ..., x_{sigma^-1(n)}); sigma one-line 1-based."""
    inv = [0] * n
    for i, s in enumerate(sigma):
        inv[s - 1] = i + 1
    out = {}
    for o in range(d):
        for xs in product(range(d), repeat=n):
            ys = tuple(xs[inv[j] - 1] for j in range(n))
            out[(o,) + xs] = f.get((o,) + ys, Fraction(0))
    return out


def gamma(f, d, gs):
    """gs = list of (map, arity)."""
    ks = [k for _, k in gs]
    total = sum(ks)
    out = {}
    for o in range(d):
        for xs in product(range(d), repeat=total):
            acc = Fraction(0)
            pos = 0
            blocks = []
            for k in ks:
                blocks.append(xs[pos:pos + k])
                pos += k
            for mids in product(range(d), repeat=len(gs)):
                term = f.get((o,) + mids, Fraction(0))
                if term == 0:
                    continue
                for (g, _), m, blk in zip(gs, mids, blocks):
                    term *= g.get((m,) + blk, Fraction(0))
                    if term == 0:
                        break
                acc += term
            out[(o,) + xs] = acc
    return out


def identity_map(d):
    return {(o, x): Fraction(int(o == x)) for o in range(d) for x in range(d)}


def circ(f, m, d, i, g, n):
    gs = [(identity_map(d), 1)] * m
    gs = list(gs)
    gs[i - 1] = (g, n)
    return gamma(f, d, gs)


def equal(a, b):
    keys = set(a) | set(b)
    return all(a.get(k, 0) == b.get(k, 0) for k in keys)
