import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from autfn.free_group import (
    Word,
    commutator,
    conjugacy_class,
    cyclic_reduce,
    identity_word,
    invert,
    is_conjugate,
    letter,
    multiply,
    normalize,
    parse_word,
    project_kill,
)
from oracles import all_rotations, naive_reduce

N = 4
tokens = st.lists(st.integers(1, N).flatmap(lambda i: st.sampled_from([i, -i])), max_size=30)


def word(toks, n=N):
    return normalize(toks, n)


def test_reduction_matches_naive_oracle_200_cases():
    rng = random.Random(11)
    for _ in range(200):
        toks = [rng.choice([1, -1]) * rng.randint(1, 3) for _ in range(rng.randint(0, 40))]
        assert normalize(toks, 3).letters == naive_reduce(toks)


@given(tokens)
def test_normalize_is_reduced_and_idempotent(toks):
    w = word(toks)
    assert all(a != -b for a, b in zip(w.letters, w.letters[1:]))
    assert normalize(w.letters, N) == w


@given(tokens, tokens, tokens)
def test_group_axioms(a, b, c):
    a, b, c = word(a), word(b), word(c)
    e = identity_word(N)
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
    assert a * e == a == e * a
    assert a * invert(a) == e == invert(a) * a


def test_unreduced_word_rejected():
    with pytest.raises(ValueError):
        Word(2, (1, -1))
    with pytest.raises(ValueError):
        Word(2, (3,))


def test_rank_mismatch():
    with pytest.raises(ValueError):
        multiply(letter(1, 2), letter(1, 3))


def test_commutator_convention():
    a, b = letter(1, 2), letter(2, 2)
    assert commutator(a, b).letters == (1, 2, -1, -2)


def test_text_format_round_trip():
    assert str(parse_word("v1 v2^-1 v1", 2)) == "v1 v2^-1 v1"
    assert str(parse_word("1", 2)) == "1"
    assert str(parse_word("v1 v1^-1", 2)) == "1"
    with pytest.raises(ValueError):
        parse_word("x1", 2)
    with pytest.raises(ValueError):
        parse_word("", 2)


@given(tokens)
def test_text_round_trip_property(toks):
    w = word(toks)
    assert parse_word(str(w), N) == w


@given(tokens)
def test_cyclic_reduce_decomposition(toks):
    w = word(toks)
    core, u = cyclic_reduce(w)
    assert u * core * invert(u) == w
    if len(core) > 1:
        assert core.letters[0] != -core.letters[-1]


@given(tokens, tokens)
def test_conjugates_share_class(a, g):
    a, g = word(a), word(g)
    assert is_conjugate(a, g * a * invert(g))
    assert conjugacy_class(a) == conjugacy_class(g * a * invert(g))


@given(tokens, tokens)
def test_conjugacy_against_rotation_oracle(a, b):
    a, b = word(a), word(b)
    ca, cb = cyclic_reduce(a)[0].letters, cyclic_reduce(b)[0].letters
    assert is_conjugate(a, b) == (cb in all_rotations(list(ca)))


def test_non_conjugate_examples():
    a, b = letter(1, 2), letter(2, 2)
    assert not is_conjugate(a, b)
    assert not is_conjugate(a, invert(a))
    assert not is_conjugate(a * b, a * invert(b))


def test_project_kill():
    w = parse_word("v1 v2 v1^-1 v3 v2^-1", 3)
    assert str(project_kill(w, 1)) == "v2 v3 v2^-1"
    assert project_kill(w, 3).is_identity()
    assert project_kill(w, 1).rank == 3
