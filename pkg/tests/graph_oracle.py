"""Brute-force stable-graph enumeration, deduplicated with networkx
isomorphism (independent of the package's canonical labeling)."""
from itertools import combinations_with_replacement, product

import networkx as nx


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def stable_graph_classes(g, n):
    reps = []
    legs = list(range(n + 1))
    for V in range(1, 2 * g + n):
        pairs = [(i, j) for i in range(V) for j in range(i, V)]
        for b1 in range(0, g + 1):
            E = V - 1 + b1
            for gens in _compositions(g - b1, V):
                for edges in combinations_with_replacement(pairs, E):
                    G = nx.MultiGraph()
                    G.add_nodes_from(range(V))
                    G.add_edges_from(edges)
                    if not nx.is_connected(G):
                        continue
                    for assign in product(range(V), repeat=len(legs)):
                        ok = True
                        for v in range(V):
                            val = sum(2 if a == b else 1 for a, b in edges if v in (a, b))
                            val += sum(1 for x in assign if x == v)
                            if 2 * (gens[v] - 1) + val <= 0:
                                ok = False
                                break
                        if not ok:
                            continue
                        H = G.copy()
                        for v in range(V):
                            H.nodes[v]["tag"] = (gens[v], tuple(sorted(l for l, x in zip(legs, assign) if x == v)))
                        if not any(nx.is_isomorphic(H, R, node_match=lambda a, b: a["tag"] == b["tag"]) for R in reps):
                            reps.append(H)
    return reps
