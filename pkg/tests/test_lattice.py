import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autfn.matrix import IntMatrix
from autfn.zcomplex import lattice
from autfn.zcomplex.lattice import (
    check_snf,
    invariant_factors,
    is_primitive,
    primitive_vectors,
    reduce_rank,
    smith_normal_form,
    spans_direct_summand,
    unimodular_complete,
)
from oracles import leibniz_det

entry = st.integers(-6, 6)


def mats(max_dim=4):
    return st.tuples(st.integers(1, max_dim), st.integers(1, max_dim)).flatmap(
        lambda rc: st.lists(st.lists(entry, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    )


def test_snf_verification_on_in_tests():
    assert lattice.VERIFY_SNF


@given(mats())
def test_snf_postconditions(rows):
    A = IntMatrix.of(rows)
    res = smith_normal_form(A)
    check_snf(A, res)
    assert [d for d in res.diagonal if d] == invariant_factors(rows)


def _minors_gcd(rows, k):
    import math

    g = 0
    m, n = len(rows), len(rows[0])
    for ri in itertools.combinations(range(m), k):
        for ci in itertools.combinations(range(n), k):
            g = math.gcd(g, leibniz_det([[rows[i][j] for j in ci] for i in ri]))
    return g


@settings(max_examples=60)
@given(mats(3))
def test_invariant_factors_match_determinantal_divisors(rows):
    # d_1 ... d_k = gcd of k x k minors
    facs = invariant_factors(rows)
    prod = 1
    for k in range(1, min(len(rows), len(rows[0])) + 1):
        g = _minors_gcd(rows, k)
        if k <= len(facs):
            prod *= facs[k - 1]
            assert prod == g
        else:
            assert g == 0


def test_check_snf_rejects_garbage():
    A = IntMatrix.of([[2, 0], [0, 3]])
    res = smith_normal_form(A)
    assert res.diagonal == [1, 6]
    bad = lattice.SNFResult(res.U, A, res.V)
    with pytest.raises(AssertionError):
        check_snf(A, bad)


vec = st.lists(entry, min_size=4, max_size=4)


def _random_unimodular(rng, n):
    a = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(8):
        i, j = rng.sample(range(n), 2)
        q = rng.choice([-1, 1])
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
    return a


@given(st.lists(vec, min_size=1, max_size=3), st.integers(0, 10**6))
def test_summand_invariances(vs, seed):
    rng = random.Random(seed)
    base = spans_direct_summand(vs)
    perm = list(vs)
    rng.shuffle(perm)
    assert spans_direct_summand(perm) == base
    negated = [[-x for x in v] if rng.random() < 0.5 else v for v in vs]
    assert spans_direct_summand(negated) == base
    U = _random_unimodular(rng, 4)
    moved = [[sum(U[i][j] * v[j] for j in range(4)) for i in range(4)] for v in vs]
    assert spans_direct_summand(moved) == base


def test_summand_examples():
    assert spans_direct_summand([(1, 0, 0)])
    assert not spans_direct_summand([(2, 0, 0)])
    assert spans_direct_summand([(1, 1, 0), (0, 1, 1)])
    assert not spans_direct_summand([(1, 1, 0), (1, -1, 0)])
    assert not spans_direct_summand([(1, 0), (1, 0)])
    with pytest.raises(ValueError):
        spans_direct_summand([(1, 0), (0, 1), (1, 1)])


def test_unimodular_complete_random():
    rng = random.Random(2)
    done = 0
    while done < 50:
        n = rng.randint(2, 5)
        k = rng.randint(1, n)
        U = _random_unimodular(rng, n)
        vs = [tuple(U[i]) for i in range(k)]
        full = unimodular_complete(vs)
        assert full[:k] == vs
        assert abs(leibniz_det([list(r) for r in full])) == 1
        done += 1
    with pytest.raises(ValueError):
        unimodular_complete([(2, 0)])


def test_primitive_vectors_oracle():
    import math

    for n, b in [(2, 1), (2, 3), (3, 2)]:
        got = primitive_vectors(n, b)
        expect = sorted(v for v in itertools.product(range(-b, b + 1), repeat=n) if math.gcd(*v) == 1)
        assert got == expect
        assert all(is_primitive(v) for v in got)
    assert len(primitive_vectors(2, 1)) == 8


def test_reduce_rank():
    assert reduce_rank((0, 7), (1, 3)) == ((-2, 1), -2)
    # tie |c + q r| between q=-1 and q=-2 at r=2, c=3: 1 vs -1, prefer |q|=1
    assert reduce_rank((0, 3), (1, 2)) == ((-1, 1), -1)
    with pytest.raises(ValueError):
        reduce_rank((1, 1), (1, 0))
