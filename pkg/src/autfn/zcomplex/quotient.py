"""The vertex map from partial bases of F_n to B_n(Z)."""

from __future__ import annotations

from typing import Sequence

from ..automorphism import abelianize_word
from ..free_group import Word
from .lattice import spans_direct_summand

__all__ = ["abelianized_simplex"]


def abelianized_simplex(partial: Sequence[Word]) -> tuple[tuple[int, ...], ...]:
    """Exponent-sum vectors of a partial basis, in the given order.

    A partial basis of F_n always lands on a simplex of B_n(Z); this is
    asserted so that a bogus input is caught rather than silently mapped.
    """
    vecs = tuple(abelianize_word(w) for w in partial)
    if not spans_direct_summand(vecs):
        raise ValueError("abelianized tuple does not span a direct summand; not a partial basis")
    return vecs
