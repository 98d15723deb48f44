"""Nested substitutions for every flavor of pasting scheme, used to check the
associativity and unit laws of the substitution (triple) multiplication."""

from operad_forge.pasting import (canonicalize, corolla, directed_corolla, enumerate_cyclic_trees,
                                  enumerate_directed_graphs, enumerate_rooted_trees, enumerate_stable_graphs,
                                  rooted_corolla, substitute)
from operad_forge.pasting.subst import substitute_with_map

MAX_TOTAL = 6


def _flavors():
    return ["rooted", "cyclic", "modular", "prop", "properad", "dioperad", "half"]


def schemes(flavor, size):
    """Schemes with at most `size` vertices and small leg counts."""
    out = []
    if flavor == "rooted":
        for n in range(2, 5):
            out += enumerate_rooted_trees(n, 2, max_vertices=size)
    elif flavor == "cyclic":
        for n in range(2, 5):
            out += enumerate_cyclic_trees(n, 3, max_vertices=size)
    elif flavor == "modular":
        for g, n in [(0, 2), (0, 3), (1, 0), (1, 1), (2, -1)]:
            out += [G for G in enumerate_stable_graphs(g, n) if G.n_vertices <= size]
    else:
        for m in (1, 2):
            for n in (1, 2):
                out += [G for G in enumerate_directed_graphs(m, n, size, flavor) if G.n_vertices >= 1]
    return [G for G in out if G.n_vertices >= 1]


def inner_options(flavor, G, v, size):
    """Schemes that fit into vertex v of G, with at most `size` vertices."""
    if flavor == "rooted":
        k = len(G.in_flags(v))
        return enumerate_rooted_trees(k, 2, max_vertices=size)
    if flavor == "cyclic":
        return enumerate_cyclic_trees(G.valence(v) - 1, 3, max_vertices=size)
    if flavor == "modular":
        return [H for H in enumerate_stable_graphs(G.genus[v], G.valence(v) - 1) if H.n_vertices <= size]
    p, q = G.biarity(v)
    return [H for H in enumerate_directed_graphs(p, q, size, flavor) if H.n_vertices >= 1]


def unit_corolla(flavor, G, v):
    if flavor == "rooted":
        return rooted_corolla(len(G.in_flags(v)))
    if flavor == "cyclic":
        return corolla(G.valence(v), "cyclic")
    if flavor == "modular":
        return corolla(G.valence(v), "modular", G.genus[v])
    return directed_corolla(*G.biarity(v))


def whole_corolla(flavor, G):
    """The corolla with the same legs as G."""
    if flavor == "rooted":
        return rooted_corolla(len(G.legs()) - 1)
    if flavor == "cyclic":
        return corolla(len(G.legs()), "cyclic")
    if flavor == "modular":
        from operad_forge.pasting import genus
        return corolla(len(G.legs()), "modular", genus(G))
    m = sum(1 for f in G.legs() if G.labels[f][0] == "out")
    return directed_corolla(m, len(G.legs()) - m)


def same(a, b):
    return canonicalize(a).data == canonicalize(b).data


def associativity_cases(flavor, limit=None):
    """Yield (G, v, H, w, K) with |G| + |H| + |K| - 2 <= MAX_TOTAL."""
    count = 0
    for G in schemes(flavor, 3):
        for v in range(G.n_vertices):
            for H in inner_options(flavor, G, v, MAX_TOTAL - G.n_vertices + 1):
                for w in range(H.n_vertices):
                    budget = MAX_TOTAL - G.n_vertices - H.n_vertices + 2
                    for K in inner_options(flavor, H, w, budget):
                        yield G, v, H, w, K
                        count += 1
                        if limit and count >= limit:
                            return


def check_associativity(G, v, H, w, K):
    G1, vmap = substitute_with_map(G, {v: H})
    left = substitute(G1, {vmap[(v, w)]: K})
    right = substitute(G, {v: substitute(H, {w: K})})
    return same(left, right)


def check_units(flavor, G):
    units = {v: unit_corolla(flavor, G, v) for v in range(G.n_vertices)}
    right_unit = same(substitute(G, units), G)
    C = whole_corolla(flavor, G)
    left_unit = same(substitute(C, {0: G}), G)
    return right_unit and left_unit
