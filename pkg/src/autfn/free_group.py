"""Reduced words in the free group F_n.

Letters are signed integers in Tietze form: ``i`` is the basis element
``v_i`` and ``-i`` its inverse.  A :class:`Word` always holds a freely
reduced letter sequence together with the rank of its ambient free group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "Word",
    "ConjugacyClass",
    "normalize",
    "multiply",
    "invert",
    "commutator",
    "cyclic_reduce",
    "conjugacy_class",
    "is_conjugate",
    "project_kill",
    "identity_word",
    "letter",
    "parse_word",
    "format_letter",
    "letter_key",
]


def letter_key(x: int) -> tuple[int, int]:
    """Sort key on letters: index ascending, then ``+1`` before ``-1``."""
    return (abs(x), 0 if x > 0 else 1)


def _check_letters(letters: Iterable[int], rank: int) -> None:
    for x in letters:
        if x == 0 or abs(x) > rank:
            raise ValueError(f"letter {x} out of range for rank {rank}")


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        _check_letters(self.letters, self.rank)
        for x, y in zip(self.letters, self.letters[1:]):
            if x == -y:
                raise ValueError(f"word {self.letters} is not freely reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        return multiply(self, other)

    def __pow__(self, k: int) -> Word:
        base = self if k >= 0 else invert(self)
        out = identity_word(self.rank)
        for _ in range(abs(k)):
            out = multiply(out, base)
        return out

    def inverse(self) -> Word:
        return invert(self)

    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(format_letter(x) for x in self.letters)

    def __repr__(self) -> str:
        return f"Word({self.rank}, '{self}')"


def identity_word(rank: int) -> Word:
    return Word(rank, ())


def letter(x: int, rank: int) -> Word:
    """The one-letter word ``v_|x|^sign(x)``."""
    return Word(rank, (x,))


def normalize(tokens: Sequence[int], rank: int) -> Word:
    """Freely reduce an arbitrary letter sequence."""
    tokens = tuple(tokens)
    _check_letters(tokens, rank)
    return Word(rank, _reduce(tokens))


def _same_rank(a: Word, b: Word) -> None:
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} vs {b.rank}")


def multiply(a: Word, b: Word) -> Word:
    _same_rank(a, b)
    x, y = a.letters, b.letters
    # cancellation only happens at the junction
    i = 0
    m = min(len(x), len(y))
    while i < m and x[len(x) - 1 - i] == -y[i]:
        i += 1
    return Word(a.rank, x[: len(x) - i] + y[i:])


def invert(a: Word) -> Word:
    return Word(a.rank, tuple(-x for x in reversed(a.letters)))


def commutator(g: Word, h: Word) -> Word:
    """``[g, h] = g h g^-1 h^-1``."""
    _same_rank(g, h)
    return multiply(multiply(g, h), multiply(invert(g), invert(h)))


def cyclic_reduce(a: Word) -> tuple[Word, Word]:
    """Split ``a`` as ``conjugator * core * conjugator^-1`` with a cyclically
    reduced core."""
    xs = a.letters
    i, j = 0, len(xs) - 1
    while i < j and xs[i] == -xs[j]:
        i += 1
        j -= 1
    core = Word(a.rank, xs[i : j + 1])
    return core, Word(a.rank, xs[:i])


@dataclass(frozen=True)
class ConjugacyClass:
    """A conjugacy class, keyed by its least cyclic rotation."""

    representative: Word

    def __post_init__(self):
        xs = self.representative.letters
        if len(xs) > 1 and xs[0] == -xs[-1]:
            raise ValueError("representative must be cyclically reduced")

    def __str__(self) -> str:
        return f"[[{self.representative}]]"


def conjugacy_class(a: Word) -> ConjugacyClass:
    core, _ = cyclic_reduce(a)
    xs = core.letters
    if not xs:
        return ConjugacyClass(core)
    best = min(
        (xs[i:] + xs[:i] for i in range(len(xs))),
        key=lambda r: [letter_key(x) for x in r],
    )
    return ConjugacyClass(Word(a.rank, best))


def is_conjugate(a: Word, b: Word) -> bool:
    _same_rank(a, b)
    return conjugacy_class(a) == conjugacy_class(b)


def project_kill(a: Word, k: int) -> Word:
    """Image of ``a`` in F_n / <<v_1, ..., v_k>>, written over v_{k+1}..v_n.

    The result keeps rank ``n``; it simply never mentions v_1..v_k.
    """
    if not 0 <= k <= a.rank:
        raise ValueError(f"k={k} out of range for rank {a.rank}")
    return Word(a.rank, _reduce(x for x in a.letters if abs(x) > k))


_TOKEN = re.compile(r"^v(\d+)(\^-1)?$")


def format_letter(x: int) -> str:
    return f"v{x}" if x > 0 else f"v{-x}^-1"


def parse_word(text: str, rank: int) -> Word:
    """Parse the whitespace separated ``v3 v1^-1`` format; ``1`` is empty.

    Input need not be reduced; the returned word is.
    """
    tokens = text.split()
    if tokens == ["1"]:
        return identity_word(rank)
    if not tokens:
        raise ValueError("empty word text; use '1' for the identity")
    letters = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if m is None:
            raise ValueError(f"bad word token {tok!r}")
        i = int(m.group(1))
        letters.append(-i if m.group(2) else i)
    return normalize(letters, rank)
