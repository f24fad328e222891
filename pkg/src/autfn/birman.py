"""Stabilizers of conjugacy classes, the Birman kernel and its map to Hom(Z^n/V, V).

Throughout, ``ctx = StabilizerContext(n, k)`` fixes the partial basis
v_1..v_k; the quotient F_n / <<v_1..v_k>> is identified with the free group
on v_{k+1}..v_n (relabelled 1..n-k when it is treated as its own F_{n-k}).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import automorphism as aut
from .automorphism import FreeAutomorphism, abelianize_word
from .free_group import Word, commutator, letter, project_kill
from .relations import Failure, VerificationReport, gersten_generators, stabilizer_generators
from .zcomplex.lattice import invariant_factors

__all__ = [
    "StabilizerContext",
    "HomBlock",
    "KernelCheck",
    "magnus_generators",
    "kernel_generators",
    "is_in_kernel",
    "quotient_automorphism",
    "lift_quotient",
    "phi_hom_image",
    "phi_basis_factors",
    "verify_birman_diagram",
]


@dataclass(frozen=True)
class StabilizerContext:
    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")

    @property
    def m(self) -> int:
        return self.n - self.k


@dataclass(frozen=True)
class HomBlock:
    """A k x (n-k) integer block; possibly empty."""

    k: int
    m: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def zero(cls, k: int, m: int) -> HomBlock:
        return cls(k, m, tuple((0,) * m for _ in range(k)))

    def __add__(self, other: HomBlock) -> HomBlock:
        return HomBlock(
            self.k, self.m, tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def flat(self) -> tuple[int, ...]:
        return tuple(x for r in self.entries for x in r)


def _label(x: int) -> str:
    return f"v{x}" if x > 0 else f"v{-x}^-1"


def magnus_generators(n: int) -> list[tuple[str, FreeAutomorphism]]:
    """M(v_i, [v_j, v_k]) for distinct i, j, k, then C(v_i, v_j) for i != j."""
    out = []
    for i, j, k in itertools.permutations(range(1, n + 1), 3):
        out.append((f"M(v{i},[v{j},v{k}])", aut.mul(i, commutator(letter(j, n), letter(k, n)), n)))
    for i, j in itertools.permutations(range(1, n + 1), 2):
        out.append((f"C(v{i},v{j})", aut.con(i, j, n)))
    return out


def kernel_generators(ctx: StabilizerContext) -> list[tuple[str, FreeAutomorphism]]:
    n, k = ctx.n, ctx.k
    out = []
    for i in range(k + 1, n + 1):
        for j in range(1, k + 1):
            out.append((f"M(v{i},v{j})", aut.mul(i, j, n)))
    for i in range(1, k + 1):
        for j in range(1, n + 1):
            if j != i:
                out.append((f"C(v{i},v{j})", aut.con(i, j, n)))
    return out


@dataclass(frozen=True)
class KernelCheck:
    """Per-index results: class of v_i fixed (i <= k), v_j -> v_j mod V (j > k)."""

    stabilizer_by_index: tuple[bool, ...]
    quotient_by_index: tuple[bool, ...]
    k: int

    @property
    def stabilizer(self) -> bool:
        return all(self.stabilizer_by_index)

    @property
    def quotient_identity(self) -> bool:
        return all(self.quotient_by_index)

    @property
    def in_kernel(self) -> bool:
        return self.stabilizer and self.quotient_identity

    def records(self) -> list[dict]:
        out = [{"condition": "stabilizer", "index": i + 1, "ok": ok} for i, ok in enumerate(self.stabilizer_by_index)]
        out += [
            {"condition": "quotient_identity", "index": self.k + i + 1, "ok": ok}
            for i, ok in enumerate(self.quotient_by_index)
        ]
        return out


def is_in_kernel(phi: FreeAutomorphism, ctx: StabilizerContext) -> KernelCheck:
    if phi.rank != ctx.n:
        raise ValueError(f"rank mismatch: {phi.rank} vs {ctx.n}")
    n, k = ctx.n, ctx.k
    stab = tuple(aut.fixes_conjugacy_class(phi, letter(i, n)) for i in range(1, k + 1))
    quot = tuple(project_kill(phi.images[j - 1], k) == letter(j, n) for j in range(k + 1, n + 1))
    return KernelCheck(stab, quot, k)


def _down(w: Word, k: int) -> Word:
    """Relabel a word avoiding v_1..v_k as a word of F_{n-k}."""
    return Word(w.rank - k, tuple(x - k if x > 0 else x + k for x in w.letters))


def _up(w: Word, k: int) -> Word:
    return Word(w.rank + k, tuple(x + k if x > 0 else x - k for x in w.letters))


def quotient_automorphism(phi: FreeAutomorphism, ctx: StabilizerContext) -> FreeAutomorphism:
    """The induced automorphism of F_n / V = F_{n-k}.

    Only meaningful when phi preserves V (e.g. phi fixes the classes of v_1..v_k).
    """
    k = ctx.k
    imgs = tuple(_down(project_kill(w, k), k) for w in phi.images[k:])
    inv = tuple(_down(project_kill(w, k), k) for w in phi.inverse_images[k:])
    return FreeAutomorphism(ctx.m, imgs, inv)


def lift_quotient(psi: FreeAutomorphism, ctx: StabilizerContext) -> FreeAutomorphism:
    """The splitting: extend an automorphism of F_{n-k} by fixing v_1..v_k."""
    n, k = ctx.n, ctx.k
    fixed = tuple(letter(i, n) for i in range(1, k + 1))
    return FreeAutomorphism(
        n,
        fixed + tuple(_up(w, k) for w in psi.images),
        fixed + tuple(_up(w, k) for w in psi.inverse_images),
    )


def _ab_columns(phi: FreeAutomorphism) -> list[tuple[int, ...]]:
    return [abelianize_word(w) for w in phi.images]


def _blocks(phi: FreeAutomorphism, k: int):
    """(upper-left, upper-right, lower-left, lower-right) of the abelianization."""
    cols = _ab_columns(phi)
    n = phi.rank
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    ul = [r[:k] for r in rows[:k]]
    ur = [r[k:] for r in rows[:k]]
    ll = [r[:k] for r in rows[k:]]
    lr = [r[k:] for r in rows[k:]]
    return ul, ur, ll, lr


def _is_identity(block) -> bool:
    return all(x == (i == j) for i, r in enumerate(block) for j, x in enumerate(r))


def _is_zero(block) -> bool:
    return all(x == 0 for r in block for x in r)


def phi_hom_image(phi: FreeAutomorphism, ctx: StabilizerContext) -> HomBlock:
    """Upper-right block B of the abelianization [[I_k, B], [0, I_{n-k}]]."""
    ul, ur, ll, lr = _blocks(phi, ctx.k)
    if not (_is_identity(ul) and _is_zero(ll) and _is_identity(lr)):
        raise ValueError("abelianization is not of the form [[I, B], [0, I]]; not a kernel element")
    return HomBlock(ctx.k, ctx.m, tuple(tuple(r) for r in ur))


def phi_basis_factors(ctx: StabilizerContext) -> list[int]:
    """Invariant factors of the stacked images of the MulLeft kernel generators.

    All ones (with k(n-k) of them) means the images form a basis of the Hom lattice.
    """
    vecs = [phi_hom_image(phi, ctx).flat() for label, phi in kernel_generators(ctx) if label.startswith("M")]
    if not vecs:
        return []
    return invariant_factors(vecs)


def _quotient_generators(ctx: StabilizerContext) -> list[tuple[str, FreeAutomorphism]]:
    m = ctx.m
    gens = gersten_generators(m) if m >= 2 else []
    if m >= 1:
        gens = gens + [(f"I(v{m})", aut.invert_letter(m, m))]
    return gens


def verify_birman_diagram(ctx: StabilizerContext) -> VerificationReport:
    """Check the stabilizer / kernel / quotient diagram against its abelianization.

    * kernel generators lie in the kernel, abelianize to [[I, B], [0, I]]
      and have trivial quotient image (left square);
    * for the stabilizer generators and the lifted quotient generators the
      lower-right block equals the abelianized quotient image (right square);
    * the splitting is a section and matches block-diagonal embedding;
    * all pairwise composites of kernel and lifted quotient generators keep
      all of the above, and both Phi and the quotient map are multiplicative;
    * Phi of the MulLeft kernel generators is a basis of Hom (Smith form = I);
    * the abelianized quotient generators include every elementary
      transvection and a sign change, so the right vertical map is onto.
    """
    n, k, m = ctx.n, ctx.k, ctx.m
    kernel = kernel_generators(ctx)
    quotient = _quotient_generators(ctx)
    lifted = [(f"lift {lab}", lift_quotient(q, ctx)) for lab, q in quotient]
    stab = stabilizer_generators(n, k)
    reports = []

    def middle_failures(label, phi) -> list[Failure]:
        out = []
        chk = is_in_kernel(phi, ctx)
        if not chk.stabilizer:
            out.append(Failure({"g": label}, None, "stabilizer", "violated"))
            return out
        ul, _, ll, lr = _blocks(phi, k)
        if not (_is_identity(ul) and _is_zero(ll)):
            out.append(Failure({"g": label}, None, "abelianization", "not in Aut(Z^n, V)"))
        q = quotient_automorphism(phi, ctx)
        if not q.check_inverse():
            out.append(Failure({"g": label}, None, "quotient", "not an automorphism"))
        qcols = _ab_columns(q)
        qrows = [[qcols[j][i] for j in range(m)] for i in range(m)]
        if qrows != lr:
            out.append(Failure({"g": label}, None, str(qrows), str(lr), "right square"))
        return out

    # left square
    total, fails = 0, []
    for label, phi in kernel:
        total += 1
        chk = is_in_kernel(phi, ctx)
        if not chk.in_kernel:
            fails.append(Failure({"g": label}, None, str(chk.records()), "in kernel"))
            continue
        try:
            phi_hom_image(phi, ctx)
        except ValueError as exc:
            fails.append(Failure({"g": label}, None, str(exc), "block form"))
        q = quotient_automorphism(phi, ctx)
        if not aut.equals(q, aut.identity(m)):
            fails.append(Failure({"g": label}, None, str(q), "identity", "kernel maps to 1"))
    reports.append(VerificationReport("kernel generators (left square)", total, fails))

    # right square on stabilizer and lifted quotient generators
    total, fails = 0, []
    for label, phi in stab + lifted:
        total += 1
        fails.extend(middle_failures(label, phi))
    reports.append(VerificationReport("stabilizer generators (right square)", total, fails))

    # splitting
    total, fails = 0, []
    for (label, q), (_, lq) in zip(quotient, lifted):
        total += 1
        if not aut.equals(quotient_automorphism(lq, ctx), q):
            fails.append(Failure({"g": label}, None, "Q(lift(s))", "s"))
        ul, ur, ll, lr = _blocks(lq, k)
        qcols = _ab_columns(q)
        if not (_is_identity(ul) and _is_zero(ur) and _is_zero(ll)) or lr != [
            [qcols[j][i] for j in range(m)] for i in range(m)
        ]:
            fails.append(Failure({"g": label}, None, "ab(lift(s))", "diag(I, ab(s))"))
    reports.append(VerificationReport("splitting", total, fails))

    # pairs
    total, fails = 0, []
    gens = kernel + lifted
    kernel_labels = {lab for lab, _ in kernel}
    quot_cache = {lab: quotient_automorphism(phi, ctx) for lab, phi in gens}
    phi_cache = {lab: phi_hom_image(phi, ctx) for lab, phi in kernel}
    for (l1, g1), (l2, g2) in itertools.product(gens, repeat=2):
        total += 1
        c = aut.compose(g1, g2)
        label = f"{l1} . {l2}"
        fails.extend(middle_failures(label, c))
        if not aut.equals(quotient_automorphism(c, ctx), aut.compose(quot_cache[l1], quot_cache[l2])):
            fails.append(Failure({"g": label}, None, "Q(gh)", "Q(g)Q(h)"))
        if l1 in kernel_labels and l2 in kernel_labels:
            if phi_hom_image(c, ctx) != phi_cache[l1] + phi_cache[l2]:
                fails.append(Failure({"g": label}, None, "Phi(gh)", "Phi(g)+Phi(h)"))
    reports.append(VerificationReport("generator pairs", total, fails))

    # Phi(T) is a basis
    factors = phi_basis_factors(ctx)
    ok = factors == [1] * (k * m)
    reports.append(
        VerificationReport(
            "Phi basis (Smith form = I)",
            1,
            [] if ok else [Failure({}, None, str(factors), f"{[1] * (k * m)}")],
        )
    )

    # right vertical map onto: elementary matrices and a sign change are hit
    fails = []
    if m >= 1:
        hit = set()
        for _, q in quotient:
            cols = _ab_columns(q)
            hit.add(tuple(tuple(cols[j][i] for j in range(m)) for i in range(m)))
        needed = []
        for i, j in itertools.permutations(range(m), 2):
            needed.append(tuple(tuple(int(r == c) + int(r == i and c == j) for c in range(m)) for r in range(m)))
        needed.append(tuple(tuple((-1 if r == c == m - 1 else int(r == c)) for c in range(m)) for r in range(m)))
        for mat in needed:
            if mat not in hit:
                fails.append(Failure({}, None, str(mat), "not hit by a quotient generator"))
        reports.append(VerificationReport("quotient onto GL (elementary matrices hit)", len(needed), fails))
    return VerificationReport.combine(f"birman diagram n={n} k={k}", reports)
