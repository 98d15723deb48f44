"""Exact computations with operads, cyclic and modular operads, PROPs and
their relatives: pasting schemes, free constructions, presentations,
algebras and normal forms in the bialgebra PROP."""

__version__ = "0.1.0"
