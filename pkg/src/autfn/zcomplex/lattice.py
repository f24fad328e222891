"""Integer lattice linear algebra: Smith normal form and direct summands."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from ..matrix import IntMatrix

__all__ = [
    "SNFResult",
    "VERIFY_SNF",
    "smith_normal_form",
    "check_snf",
    "invariant_factors",
    "spans_direct_summand",
    "unimodular_complete",
    "is_primitive",
    "primitive_vectors",
    "coordinate_rank",
    "reduce_rank",
]

# When set, every smith_normal_form call re-verifies U A V = D and the
# divisibility chain.  The test suite switches this on.
VERIFY_SNF = False


@dataclass(frozen=True)
class SNFResult:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        r, c = self.D.shape
        return [self.D[i, i] for i in range(min(r, c))]


def _mat(a: list[list[int]]) -> IntMatrix:
    return IntMatrix(tuple(tuple(r) for r in a))


def smith_normal_form(A: IntMatrix) -> SNFResult:
    """Return unimodular U, V with U A V = D diagonal, d_1 | d_2 | ..., d_i >= 0."""
    m, n = A.shape
    d = [list(r) for r in A.rows]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst += q col_src
        for r in d:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = d[t][t]
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
            if any(d[i][t] for i in range(t + 1, m)) or any(d[t][j] for j in range(t + 1, n)):
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if not any(d[i][j] for i in range(t, m) for j in range(t, n)):
            break
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    res = SNFResult(_mat(u), _mat(d), _mat(v))
    if VERIFY_SNF:
        check_snf(A, res)
    return res


def check_snf(A: IntMatrix, res: SNFResult) -> None:
    """Raise AssertionError unless ``res`` is a valid Smith form of ``A``."""
    U, D, V = res.U, res.D, res.V
    assert U @ A @ V == D, "U A V != D"
    assert abs(U.det()) == 1 and abs(V.det()) == 1, "transforms not unimodular"
    m, n = D.shape
    assert all(D[i, j] == 0 for i in range(m) for j in range(n) if i != j), "D not diagonal"
    diag = res.diagonal
    assert all(x >= 0 for x in diag), "negative invariant factor"
    for a, b in zip(diag, diag[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0), "divisibility chain broken"


def invariant_factors(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix, without transforms."""
    d = [list(r) for r in rows if any(r)]
    if not d:
        return []
    m, n = len(d), len(d[0])
    out = []
    t = 0
    while t < min(m, n):
        entries = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        d[t], d[pi] = d[pi], d[t]
        for r in d:
            r[t], r[pj] = r[pj], r[t]
        p = d[t][t]
        for i in range(t + 1, m):
            if d[i][t]:
                q = d[i][t] // p
                d[i] = [x - q * y for x, y in zip(d[i], d[t])]
        for j in range(t + 1, n):
            if d[t][j]:
                q = d[t][j] // p
                for r in d:
                    r[j] -= q * r[t]
        if any(d[i][t] for i in range(t + 1, m)) or any(d[t][j] for j in range(t + 1, n)):
            continue
        bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p), None)
        if bad is not None:
            d[t] = [x + y for x, y in zip(d[t], d[bad])]
            continue
        out.append(abs(p))
        t += 1
    return out


@lru_cache(maxsize=1 << 18)
def _summand(vectors: tuple[tuple[int, ...], ...]) -> bool:
    return invariant_factors(vectors) == [1] * len(vectors)


def spans_direct_summand(vectors: Sequence[Sequence[int]]) -> bool:
    """True iff the k vectors span a rank-k direct summand of Z^n."""
    vecs = tuple(sorted(tuple(v) for v in vectors))
    if not vecs:
        return True
    if len(vecs) > len(vecs[0]):
        raise ValueError("more vectors than the ambient dimension")
    if len(set(vecs)) != len(vecs):
        return False
    return _summand(vecs)


def unimodular_complete(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extend k vectors spanning a summand of Z^n to a basis of Z^n.

    With the k x n matrix A and U A V = [I_k | 0], the last n-k columns of
    V^-1 complete A's rows: stacking A over those rows gives a matrix of
    determinant +-1.
    """
    vecs = [tuple(int(x) for x in v) for v in vectors]
    if not vecs:
        raise ValueError("need at least one vector")
    n, k = len(vecs[0]), len(vecs)
    if not spans_direct_summand(vecs):
        raise ValueError("input does not span a direct summand")
    if k == n:
        return vecs
    res = smith_normal_form(IntMatrix.of(vecs))
    # rows of V^-1 = basis in which A looks like [U^-1 | 0]
    vinv = smith_normal_form_inverse(res.V)
    return vecs + [vinv.rows[i] for i in range(k, n)]


def smith_normal_form_inverse(V: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix via its own Smith form."""
    res = smith_normal_form(V)
    if any(x != 1 for x in res.diagonal):
        raise ValueError("matrix is not unimodular")
    # U V W = I  =>  V^-1 = W U
    return res.V @ res.U


def is_primitive(v: Sequence[int]) -> bool:
    return math.gcd(*v) == 1


def primitive_vectors(n: int, bound: int) -> list[tuple[int, ...]]:
    """Primitive vectors with max-norm <= bound, in lexicographic order."""
    rng = range(-bound, bound + 1)
    return [v for v in itertools.product(rng, repeat=n) if is_primitive(v)]


def coordinate_rank(v: Sequence[int]) -> int:
    """|last coordinate|."""
    return abs(v[-1])


def reduce_rank(vx: Sequence[int], v: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Return (vx + q v, q) minimizing |last coordinate|, ties toward smaller |q|."""
    r = v[-1]
    if r == 0:
        raise ValueError("pivot needs a nonzero last coordinate")
    c = vx[-1]
    q0 = -c // r  # floor
    best = min((q0, q0 + 1), key=lambda q: (abs(c + q * r), abs(q)))
    return tuple(a + best * b for a, b in zip(vx, v)), best
