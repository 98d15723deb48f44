"""Pasting schemes: trees and graphs, canonical forms, enumeration, substitution."""

from .graph import (FlagGraph, GraphError, betti1, components, corolla, directed_corolla,
                    genus, identity_wires, is_acyclic, is_connected, is_stable, label_key,
                    nested_from_rooted, rooted_corolla, rooted_from_nested)
from .canon import CanonicalForm, automorphisms, canonicalize, isomorphic
from .enumerate import (DEFAULT_BIARITIES, FAMILIES, MayTree, enumerate_cyclic_trees,
                        enumerate_directed_graphs, enumerate_may_trees, enumerate_rooted_trees,
                        enumerate_stable_graphs, family_predicate, is_half_graph, is_may_tree, nested_trees,
                        may_levels, set_partitions)
from .subst import check_hereditary, default_leg_map, substitute, substitute_with_map
from .export import census, census_line, to_dot

__all__ = [
    "FlagGraph", "GraphError", "betti1", "components", "corolla", "directed_corolla", "genus",
    "identity_wires", "is_acyclic", "is_connected", "is_stable", "label_key", "nested_from_rooted",
    "rooted_corolla", "rooted_from_nested", "CanonicalForm", "automorphisms", "canonicalize",
    "isomorphic", "DEFAULT_BIARITIES", "FAMILIES", "MayTree", "enumerate_cyclic_trees",
    "enumerate_directed_graphs", "enumerate_may_trees", "enumerate_rooted_trees",
    "enumerate_stable_graphs", "family_predicate", "is_half_graph", "is_may_tree", "may_levels", "nested_trees",
    "set_partitions", "check_hereditary", "default_leg_map", "substitute", "substitute_with_map",
    "census", "census_line", "to_dot",
]
