"""Truncated free constructions and their structure operations."""

from .element import FreeElement, FreeError
from .trees import TREE_FLAVORS, TreeOperad, is_may_term, leaves, tree_to_graph
from .structures import (UNIT, MarklStructure, MayStructure, MissingUnitError, adjoin_unit,
                         augmentation_ideal, check_unit_laws, counterexample_V,
                         find_markl_obstruction, markl_from_free, markl_from_may, may_from_free,
                         may_from_markl)
from .graphs import (GRAPH_FLAVORS, ClassInfo, FreeComponentBasis, GraphConstruction,
                     normalize_decorated, substitute_decorated)

__all__ = ["FreeElement", "FreeError", "TREE_FLAVORS", "TreeOperad", "is_may_term", "leaves",
           "tree_to_graph", "GRAPH_FLAVORS", "ClassInfo", "FreeComponentBasis",
           "GraphConstruction", "normalize_decorated", "substitute_decorated", "UNIT", "MarklStructure", "MayStructure", "MissingUnitError",
           "adjoin_unit", "augmentation_ideal", "check_unit_laws", "counterexample_V",
           "find_markl_obstruction", "markl_from_free", "markl_from_may", "may_from_free",
           "may_from_markl"]
