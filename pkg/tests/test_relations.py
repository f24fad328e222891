"""Relation checking: pinned instance counts, hand-computed oracles and
sensitivity to deliberately wrong relations."""

import itertools

import pytest

from autfn import automorphism as aut
from autfn.free_group import Word, letter
from autfn.relations import (
    GERSTEN_FAMILIES,
    TABLE1,
    Family,
    edge_certificate,
    gersten_generators,
    signed_letters,
    stabilizer_generators,
    verify_edge_property,
    verify_family,
    verify_gersten,
    verify_identities,
    verify_table1,
)
from oracles import naive_reduce, naive_substitute

GERSTEN_COUNTS = {
    3: (342, [24, 192, 48, 24, 24, 24, 6]),
    4: (1452, [48, 1056, 192, 48, 48, 48, 12]),
}


@pytest.mark.parametrize("n", [3, 4])
def test_gersten_passes_with_pinned_counts(n):
    rep = verify_gersten(n)
    total, per_family = GERSTEN_COUNTS[n]
    assert rep.ok, rep.to_text()
    assert rep.total == total
    assert [c.total for c in rep.children] == per_family
    assert len(rep.children) == 7


def test_gersten_rank_guard():
    with pytest.raises(ValueError):
        verify_gersten(2)


def test_family_counts_against_combinatorics():
    # M(a,b) M(a,b^-1) = 1 runs over ordered pairs of signed letters with
    # distinct indices; C(a,b) decomposition over ordered index pairs
    for n in (3, 4):
        first = sum(1 for a, b in itertools.product(signed_letters(n), repeat=2) if abs(a) != abs(b))
        assert first == 2 * n * 2 * (n - 1)
        assert verify_family(GERSTEN_FAMILIES[0], n).total == first
        assert verify_family(GERSTEN_FAMILIES[6], n).total == n * (n - 1)


def _images(f):
    return [w.letters for w in f.images]


def test_swap_order_four_by_hand():
    # a -> b^-1, b -> a, written out without the library
    n = 3
    imgs = [(-2,), (1,), (3,)]
    cur = [(1,), (2,), (3,)]
    for _ in range(4):
        cur = [naive_substitute(imgs, w) for w in cur]
    assert cur == [(1,), (2,), (3,)]
    assert _images(aut.swap(1, 2, n)) == imgs


def test_commutator_relation_by_hand():
    # [M(b,a^-1), M(c,b^-1)] = M(c,a) with a=v1, b=v2, c=v3; composite
    # g h g^-1 h^-1 applied right to left, each map written by hand
    g = [(1,), (-1, 2), (3,)]  # b -> a^-1 b
    g_inv = [(1,), (1, 2), (3,)]
    h = [(1,), (2,), (-2, 3)]  # c -> b^-1 c
    h_inv = [(1,), (2,), (2, 3)]
    maps = [g, h, g_inv, h_inv]
    result = []
    for i in (1, 2, 3):
        w = (i,)
        for m in reversed(maps):
            w = naive_substitute(m, w)
        result.append(w)
    assert result == [(1,), (2,), (1, 3)]
    assert result == _images(aut.mul(3, letter(1, 3), 3))


def test_verifier_detects_wrong_relation():
    bad = Family("wrong", ("W(a,b)^2", "1"), ("a", "b"), condition=lambda a, b: abs(a) != abs(b))
    rep = verify_family(bad, 3)
    assert not rep.ok
    assert rep.total == 24 and len(rep.failures) == 24
    f = rep.failures[0]
    assert f.letter is not None and f.lhs != f.rhs


@pytest.mark.parametrize("n,total,parts", [(3, 18, [6, 6, 6]), (4, 60, [24, 24, 12])])
def test_identities(n, total, parts):
    rep = verify_identities(n)
    assert rep.ok, rep.to_text()
    assert rep.total == total
    assert [c.total for c in rep.children] == parts


def test_table_rows_and_defaults():
    rep = verify_table1(4, include_default_cases=True, default_rank=5)
    assert rep.ok, rep.to_text()
    assert [c.total for c in rep.children] == [672, 384, 1440, 800]
    assert rep.total == 3296
    assert len(TABLE1["K(c,a,b)"]) == 23 and len(TABLE1["C(c,a)"]) == 10


def test_table_right_reading_fails_except_four_rows():
    rep = verify_table1(4, reading="right")
    passing = sorted(
        row.family.split(" s=")[1] for block in rep.children for row in block.children if row.ok
    )
    assert passing == ["M(a,b)^e", "M(a^e,c)^d", "M(a^e,x)^d", "M(b,a)^e"]


def test_table_guards():
    with pytest.raises(ValueError):
        verify_table1(3)
    with pytest.raises(ValueError):
        verify_table1(4, include_default_cases=True, default_rank=4)


@pytest.mark.parametrize("n,total,fixed,cert", [(2, 18, 6, 12), (3, 54, 30, 24), (4, 108, 72, 36)])
def test_edge_property(n, total, fixed, cert):
    rep = verify_edge_property(n)
    assert rep.ok, rep.to_text()
    assert rep.total == total
    assert [c.total for c in rep.children] == [fixed, cert]


def test_edge_certificate_on_examples():
    n = 3
    for target in [(2,), (-3,), (1, 1, 2, -1), (-1, -3, 1, 1)]:
        w = Word(n, naive_reduce(target))
        specs, phi = edge_certificate(w)
        assert phi.check_inverse()
        assert _images(phi)[0] == (1,) and _images(phi)[1] == naive_reduce(target)
    assert edge_certificate(Word(n, (2, 3))) is None


def test_generating_sets():
    gens = gersten_generators(3)
    # M(a,b) over signed letters, W(a,b) over signed letters, C(a,b) over indices
    assert len(gens) == 24 + 24 + 6
    assert len({label for label, _ in gens}) == len(gens)
    # W(a,b) = W(a^-1,b^-1) = W(b^-1,a): the 24 swap labels give 6 maps
    assert len({g.key() for _, g in gens}) == 24 + 6 + 6
    assert all(g.check_inverse() and aut.abelianize_aut(g).det() == 1 for _, g in gens)
    for label, g in stabilizer_generators(4, 2):
        assert g.check_inverse()
        for i in (1, 2):
            assert aut.fixes_conjugacy_class(g, letter(i, 4)), label
