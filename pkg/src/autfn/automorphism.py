"""Automorphisms of F_n stored as basis images plus inverse basis images.

Conventions: automorphisms act on the left and compose right to left, so
``compose(f, g)(w) == f(g(w))``.  ``mul(a, w)`` sends the letter ``a`` (a
basis letter or its inverse) to ``w a``; ``con(a, w)`` sends ``v_i`` to
``w v_i w^-1``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Sequence, Union

from .free_group import (
    Word,
    identity_word,
    invert,
    is_conjugate,
    letter,
    multiply,
    normalize,
    parse_word,
)
from .matrix import IntMatrix

__all__ = [
    "FreeAutomorphism",
    "GeneratorSpec",
    "AutClass",
    "identity",
    "make_generator",
    "mul",
    "mul_right",
    "con",
    "swap",
    "invert_letter",
    "permute",
    "apply",
    "compose",
    "compose_all",
    "invert_aut",
    "power",
    "equals",
    "fixes_conjugacy_class",
    "abelianize_word",
    "abelianize_aut",
    "classify",
    "matrix_factorization",
    "matrix_to_automorphism",
    "basis_completion",
    "complete_basis_lift",
    "format_automorphism",
    "parse_automorphism",
]

WordLike = Union[Word, int]


def _substitute(images: Sequence[Word], w: Word) -> Word:
    rank = images[0].rank if images else w.rank
    out: list[int] = []
    for x in w.letters:
        img = images[x - 1].letters if x > 0 else tuple(-y for y in reversed(images[-x - 1].letters))
        out.extend(img)
    return normalize(out, rank)


@dataclass(frozen=True)
class FreeAutomorphism:
    rank: int
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.images) != self.rank or len(self.inverse_images) != self.rank:
            raise ValueError("need exactly rank images and inverse images")
        for w in self.images + self.inverse_images:
            if w.rank != self.rank:
                raise ValueError("image rank differs from automorphism rank")

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def __mul__(self, other: FreeAutomorphism) -> FreeAutomorphism:
        return compose(self, other)

    def inverse(self) -> FreeAutomorphism:
        return invert_aut(self)

    def check_inverse(self) -> bool:
        """Verify that images and inverse images define mutually inverse maps."""
        for i in range(self.rank):
            v = letter(i + 1, self.rank)
            if _substitute(self.images, self.inverse_images[i]) != v:
                return False
            if _substitute(self.inverse_images, self.images[i]) != v:
                return False
        return True

    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(w.letters for w in self.images)

    def __str__(self) -> str:
        return format_automorphism(self)


def identity(rank: int) -> FreeAutomorphism:
    basis = tuple(letter(i + 1, rank) for i in range(rank))
    return FreeAutomorphism(rank, basis, basis)


def _as_word(w: WordLike, rank: int) -> Word:
    if isinstance(w, Word):
        if w.rank != rank:
            raise ValueError(f"rank mismatch: word has rank {w.rank}, expected {rank}")
        return w
    return letter(w, rank)


def _check_target(a: int, rank: int) -> int:
    if a == 0 or abs(a) > rank:
        raise ValueError(f"target letter {a} out of range for rank {rank}")
    return abs(a)


def _check_avoids(w: Word, i: int) -> None:
    if any(abs(x) == i for x in w.letters):
        raise ValueError(f"word {w} must avoid the target letter v{i}")


def _replace(rank: int, i: int, img: Word, inv: Word) -> FreeAutomorphism:
    basis = [letter(j + 1, rank) for j in range(rank)]
    images, inverse_images = list(basis), list(basis)
    images[i - 1] = img
    inverse_images[i - 1] = inv
    return FreeAutomorphism(rank, tuple(images), tuple(inverse_images))


def mul(a: int, w: WordLike, rank: int) -> FreeAutomorphism:
    """Left multiplication: ``a -> w a`` for a signed basis letter ``a``."""
    i = _check_target(a, rank)
    w = _as_word(w, rank)
    _check_avoids(w, i)
    v = letter(i, rank)
    if a > 0:
        return _replace(rank, i, w * v, invert(w) * v)
    # v^-1 -> w v^-1  means  v -> v w^-1
    return _replace(rank, i, v * invert(w), v * w)


def mul_right(a: int, w: WordLike, rank: int) -> FreeAutomorphism:
    """Right multiplication: ``a -> a w``."""
    i = _check_target(a, rank)
    w = _as_word(w, rank)
    _check_avoids(w, i)
    v = letter(i, rank)
    if a > 0:
        return _replace(rank, i, v * w, v * invert(w))
    return _replace(rank, i, invert(w) * v, w * v)


def con(a: int, w: WordLike, rank: int) -> FreeAutomorphism:
    """Conjugation ``v_i -> w v_i w^-1`` (the sign of ``a`` is irrelevant)."""
    i = _check_target(a, rank)
    w = _as_word(w, rank)
    _check_avoids(w, i)
    v = letter(i, rank)
    wi = invert(w)
    return _replace(rank, i, w * v * wi, wi * v * w)


def swap(a: int, b: int, rank: int) -> FreeAutomorphism:
    """``a -> b^-1``, ``b -> a``; fixes the other basis letters."""
    i, j = _check_target(a, rank), _check_target(b, rank)
    if i == j:
        raise ValueError("swap needs letters with distinct indices")
    basis = [letter(k + 1, rank) for k in range(rank)]
    sa, sb = (1 if a > 0 else -1), (1 if b > 0 else -1)
    images = list(basis)
    # v_i^sa -> b^-1  so  v_i -> b^-sa ;  v_j^sb -> a  so  v_j -> a^sb
    images[i - 1] = letter(-b * sa, rank)
    images[j - 1] = letter(a * sb, rank)
    # the inverse is swap(b, a)
    inverse = list(basis)
    inverse[j - 1] = letter(-a * sb, rank)
    inverse[i - 1] = letter(b * sa, rank)
    return FreeAutomorphism(rank, tuple(images), tuple(inverse))


def invert_letter(i: int, rank: int) -> FreeAutomorphism:
    i = _check_target(i, rank)
    v = letter(-i, rank)
    return _replace(rank, i, v, v)


def permute(perm: Sequence[int], rank: int) -> FreeAutomorphism:
    """``v_i -> v_{perm[i-1]}``; entries may carry a sign."""
    if len(perm) != rank or sorted(abs(p) for p in perm) != list(range(1, rank + 1)):
        raise ValueError(f"{perm} is not a (signed) permutation of 1..{rank}")
    images = tuple(letter(p, rank) for p in perm)
    inverse = [None] * rank
    for i, p in enumerate(perm):
        inverse[abs(p) - 1] = letter((i + 1) if p > 0 else -(i + 1), rank)
    return FreeAutomorphism(rank, images, tuple(inverse))


@dataclass(frozen=True)
class GeneratorSpec:
    """A named generator: ``kind`` plus its parameters.

    kinds and params:
      MulLeft / MulRight: (target signed letter, word or letter)
      Conj: (target letter, word or letter)
      Swap: (a, b) signed letters
      InvertLetter: (i,)
      Permute: (perm tuple,)
    """

    kind: str
    params: tuple

    def build(self, rank: int) -> FreeAutomorphism:
        return make_generator(self, rank)

    def __str__(self) -> str:
        args = ", ".join(str(p) for p in self.params)
        return f"{self.kind}({args})"


_BUILDERS = {
    "MulLeft": mul,
    "MulRight": mul_right,
    "Conj": con,
    "Swap": swap,
}


def make_generator(spec: GeneratorSpec, rank: int) -> FreeAutomorphism:
    if spec.kind in _BUILDERS:
        return _BUILDERS[spec.kind](*spec.params, rank)
    if spec.kind == "InvertLetter":
        return invert_letter(spec.params[0], rank)
    if spec.kind == "Permute":
        return permute(spec.params[0], rank)
    raise ValueError(f"unknown generator kind {spec.kind!r}")


def _same_rank(phi: FreeAutomorphism, psi) -> None:
    if phi.rank != psi.rank:
        raise ValueError(f"rank mismatch: {phi.rank} vs {psi.rank}")


def apply(phi: FreeAutomorphism, a: Word) -> Word:
    _same_rank(phi, a)
    return _substitute(phi.images, a)


def compose(phi: FreeAutomorphism, psi: FreeAutomorphism) -> FreeAutomorphism:
    """``phi o psi``: first ``psi``, then ``phi``."""
    _same_rank(phi, psi)
    images = tuple(_substitute(phi.images, w) for w in psi.images)
    inverse = tuple(_substitute(psi.inverse_images, w) for w in phi.inverse_images)
    return FreeAutomorphism(phi.rank, images, inverse)


def compose_all(auts: Sequence[FreeAutomorphism], rank: int) -> FreeAutomorphism:
    """``auts[0] o auts[1] o ...``.

    Images and inverse images are each built by composing on the right, so
    short generators only ever grow the words additively.
    """
    images = identity(rank).images
    inverse = images
    for f in auts:
        if f.rank != rank:
            raise ValueError(f"rank mismatch: {f.rank} vs {rank}")
        images = tuple(_substitute(images, w) for w in f.images)
    for f in reversed(auts):
        inverse = tuple(_substitute(inverse, w) for w in f.inverse_images)
    return FreeAutomorphism(rank, images, inverse)


def invert_aut(phi: FreeAutomorphism) -> FreeAutomorphism:
    return FreeAutomorphism(phi.rank, phi.inverse_images, phi.images)


def power(phi: FreeAutomorphism, k: int) -> FreeAutomorphism:
    base = phi if k >= 0 else invert_aut(phi)
    out = identity(phi.rank)
    for _ in range(abs(k)):
        out = compose(out, base)
    return out


def equals(phi: FreeAutomorphism, psi: FreeAutomorphism) -> bool:
    _same_rank(phi, psi)
    return phi.images == psi.images


def fixes_conjugacy_class(phi: FreeAutomorphism, a: Word) -> bool:
    return is_conjugate(apply(phi, a), a)


def abelianize_word(a: Word) -> tuple[int, ...]:
    v = [0] * a.rank
    for x in a.letters:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def abelianize_aut(phi: FreeAutomorphism) -> IntMatrix:
    """Matrix in GL_n(Z) whose i-th column is the exponent vector of phi(v_i)."""
    return IntMatrix.from_columns([abelianize_word(w) for w in phi.images])


class AutClass(str, enum.Enum):
    IA = "IA"
    SAUT = "SAut-not-IA"
    NEG = "det-minus-one"


def classify(phi: FreeAutomorphism) -> AutClass:
    m = abelianize_aut(phi)
    if m.is_identity():
        return AutClass.IA
    return AutClass.SAUT if m.det() == 1 else AutClass.NEG


def matrix_factorization(A: IntMatrix, fixed_prefix: int = 0) -> list[GeneratorSpec]:
    """Write ``A`` as a product of abelianized MulLeft / InvertLetter generators.

    Returns generator specs ``g_1, ..., g_r`` such that the composite
    ``g_1 o ... o g_r`` abelianizes to ``A``.  ``A`` is reduced to I by column
    operations, so the partial composites abelianize to partially reduced
    copies of ``A`` and the lifted words stay short.  With ``fixed_prefix = k``
    only columns k+1..n change, so every generator fixes v_1..v_k letter for
    letter.
    """
    n, m = A.shape
    k = fixed_prefix
    if n != m:
        raise ValueError("matrix must be square")
    if not 0 <= k <= n:
        raise ValueError(f"fixed_prefix {k} out of range")
    if abs(A.det()) != 1:
        raise ValueError("matrix is not unimodular")
    if k:
        top = A.block(0, k, 0, k)
        low = A.block(k, n, 0, k)
        if any(top[i][j] != (i == j) for i in range(k) for j in range(k)) or any(
            x for r in low for x in r
        ):
            raise ValueError("constrained lift needs [[I, *], [0, *]] block shape")

    a = [list(r) for r in A.rows]
    ops: list[GeneratorSpec] = []  # column operations E_1, E_2, ... as applied

    def add_col(dst: int, src: int, q: int) -> None:
        # col_dst += q * col_src  ==  right multiplication by ab(M(v_dst, v_src^q))
        if q == 0:
            return
        for r in a:
            r[dst] += q * r[src]
        ops.append(GeneratorSpec("MulLeft", (dst + 1, normalize([src + 1 if q > 0 else -(src + 1)] * abs(q), n))))

    def flip(c: int) -> None:
        for r in a:
            r[c] = -r[c]
        ops.append(GeneratorSpec("InvertLetter", (c + 1,)))

    # only columns >= k are ever modified, so every generator fixes v_1..v_k
    for r in range(k, n):
        while True:
            nz = [c for c in range(r, n) if a[r][c] != 0]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda c: abs(a[r][c]))
            for c in nz:
                if c != p:
                    add_col(c, p, -(a[r][c] // a[r][p]))
        (p,) = nz
        if p != r:
            add_col(r, p, 1)
            add_col(p, r, -1)
        if a[r][r] == -1:
            flip(r)
        assert a[r][r] == 1
    # now lower unitriangular on rows/columns >= k; clearing bottom-up only
    # ever zeroes an entry, so nothing grows
    for r in range(n - 1, k - 1, -1):
        for c in range(k, r):
            if a[r][c]:
                add_col(c, r, -a[r][c])
    # the upper-right block is cleared against the identity columns 1..k
    for r in range(k):
        for c in range(k, n):
            if a[r][c]:
                add_col(c, r, -a[r][c])
    assert all(a[i][j] == (i == j) for i in range(n) for j in range(n))
    # A E_1 ... E_r = I, so A = E_r^-1 ... E_1^-1
    out = []
    for g in reversed(ops):
        if g.kind == "MulLeft":
            dst, w = g.params
            g = GeneratorSpec("MulLeft", (dst, invert(w)))
        out.append(g)
    return out


def matrix_to_automorphism(A: IntMatrix, fixed_prefix: int = 0) -> FreeAutomorphism:
    n = A.shape[0]
    return compose_all([make_generator(g, n) for g in matrix_factorization(A, fixed_prefix)], n)


def basis_completion(
    partial: Sequence[Word], certificate: FreeAutomorphism, target_columns: IntMatrix
) -> FreeAutomorphism:
    """Automorphism sending v_1..v_k to ``partial`` whose remaining basis images
    abelianize to ``target_columns`` (an n x (n-k) matrix)."""
    n, k = certificate.rank, len(partial)
    if tuple(certificate.images[:k]) != tuple(partial):
        raise ValueError("certificate does not carry v_1..v_k onto the partial basis")
    rows, cols = target_columns.shape
    if rows != n or cols != n - k:
        raise ValueError(f"need an {n} x {n - k} matrix of target columns")
    full = IntMatrix.from_columns([abelianize_word(w) for w in partial] + target_columns.columns())
    if abs(full.det()) != 1:
        raise ValueError("prescribed columns do not complete to a unimodular matrix")
    # work in the basis given by the certificate, where v_1..v_k are standard
    x = abelianize_aut(invert_aut(certificate)) @ full
    chi = matrix_to_automorphism(x, fixed_prefix=k)
    return compose(certificate, chi)


def complete_basis_lift(
    partial: Sequence[Word], certificate: FreeAutomorphism, target_columns: IntMatrix
) -> tuple[Word, ...]:
    return basis_completion(partial, certificate, target_columns).images


def format_automorphism(phi: FreeAutomorphism) -> str:
    return "\n".join(f"v{i + 1} -> {w}" for i, w in enumerate(phi.images))


_LINE = re.compile(r"^\s*v(\d+)\s*(->|<-)\s*(.+?)\s*$")


def _nielsen_inverse(images: Sequence[Word], rank: int, max_steps: int = 10_000):
    """Greedy Nielsen length reduction tracking the inverse.

    Returns inverse images or None if the greedy reduction gets stuck.
    """
    tup = list(images)
    # express each current tuple entry as a word in the original images:
    # track via automorphism ``track`` with tup[i] = images applied to track[i]
    track = [letter(i + 1, rank) for i in range(rank)]
    for _ in range(max_steps):
        if all(len(w) == 1 for w in tup):
            break
        best = None
        total = sum(len(w) for w in tup)
        for i in range(rank):
            for j in range(rank):
                if i == j:
                    continue
                for e in (1, -1):
                    u = tup[j] if e == 1 else invert(tup[j])
                    for side in (0, 1):
                        cand = multiply(u, tup[i]) if side == 0 else multiply(tup[i], u)
                        gain = len(tup[i]) - len(cand)
                        if gain > 0 and (best is None or gain > best[0]):
                            best = (gain, i, j, e, side, cand)
        if best is None:
            return None
        _, i, j, e, side, cand = best
        t = track[j] if e == 1 else invert(track[j])
        track[i] = multiply(t, track[i]) if side == 0 else multiply(track[i], t)
        tup[i] = cand
        if sum(len(w) for w in tup) >= total:
            return None
    if not all(len(w) == 1 for w in tup):
        return None
    if sorted(abs(w.letters[0]) for w in tup) != list(range(1, rank + 1)):
        return None
    inverse: list[Word] = [None] * rank
    for i, w in enumerate(tup):
        x = w.letters[0]
        inverse[abs(x) - 1] = track[i] if x > 0 else invert(track[i])
    return tuple(inverse)


def parse_automorphism(text: str) -> FreeAutomorphism:
    """Parse ``v<i> -> <word>`` lines.

    Optional ``v<i> <- <word>`` lines give the inverse images; without them
    the inverse is found by greedy Nielsen reduction, which may fail for
    complicated inputs.
    """
    fwd: dict[int, str] = {}
    back: dict[int, str] = {}
    for raw in text.strip().splitlines():
        if not raw.strip():
            continue
        m = _LINE.match(raw)
        if m is None:
            raise ValueError(f"bad automorphism line {raw!r}")
        (fwd if m.group(2) == "->" else back)[int(m.group(1))] = m.group(3)
    rank = len(fwd)
    if sorted(fwd) != list(range(1, rank + 1)):
        raise ValueError("need one line v<i> -> word for each i = 1..n")
    images = tuple(parse_word(fwd[i], rank) for i in range(1, rank + 1))
    if back:
        if sorted(back) != list(range(1, rank + 1)):
            raise ValueError("inverse lines must cover every basis letter")
        inverse = tuple(parse_word(back[i], rank) for i in range(1, rank + 1))
    else:
        inverse = _nielsen_inverse(images, rank)
        if inverse is None:
            raise ValueError("could not certify the map as an automorphism; supply '<-' inverse lines")
    phi = FreeAutomorphism(rank, images, inverse)
    if not phi.check_inverse():
        raise ValueError("images and inverse images are not mutually inverse")
    return phi
