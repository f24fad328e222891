"""Automorphisms of free groups: words, generators, relation checking,
Birman kernels and the lattice complex B_n(Z)."""

from .automorphism import FreeAutomorphism
from .free_group import Word, parse_word

__version__ = "0.1.0"

__all__ = ["FreeAutomorphism", "Word", "parse_word", "__version__"]
