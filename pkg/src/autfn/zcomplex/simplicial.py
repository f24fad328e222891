"""Finite simplicial complexes, the lattice complex B_n(Z), and integral homology."""

from __future__ import annotations

import itertools
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .lattice import invariant_factors, primitive_vectors, spans_direct_summand

__all__ = [
    "Simplex",
    "simplex",
    "SimplicialComplex",
    "HomologyGroup",
    "truncated_Bn",
    "star_link",
    "homology",
    "boundary_columns",
    "format_complex",
    "parse_complex",
]

Simplex = tuple  # sorted tuple of vertices


def simplex(vertices: Iterable[Hashable]) -> Simplex:
    vs = tuple(sorted(set(vertices)))
    if not vs:
        raise ValueError("a simplex is nonempty")
    return vs


@dataclass(frozen=True)
class SimplicialComplex:
    """All simplices (sorted vertex tuples), closed under nonempty faces."""

    simplices: frozenset

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[Hashable]], close: bool = True) -> SimplicialComplex:
        faces = set()
        for s in simplices:
            s = simplex(s)
            if close:
                for r in range(1, len(s) + 1):
                    faces.update(itertools.combinations(s, r))
            else:
                faces.add(s)
        return cls(frozenset(faces))

    def __contains__(self, s) -> bool:
        return simplex(s) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def vertices(self) -> list:
        return sorted(s[0] for s in self.simplices if len(s) == 1)

    def faces(self, dim: int) -> list[Simplex]:
        return sorted(s for s in self.simplices if len(s) == dim + 1)

    def is_closed(self) -> bool:
        return all(
            f in self.simplices
            for s in self.simplices
            for r in range(1, len(s))
            for f in itertools.combinations(s, r)
        )

    def maximal_simplices(self) -> list[Simplex]:
        covered = set()
        for s in self.simplices:
            for i in range(len(s)):
                covered.add(s[:i] + s[i + 1 :])
        return sorted(s for s in self.simplices if s not in covered)

    def is_subcomplex_of(self, other: SimplicialComplex) -> bool:
        return self.simplices <= other.simplices


def _build_levels(vertices, ok, max_size: int) -> set:
    """Clique-then-filter: extend each simplex by larger adjacent vertices,
    keeping only candidates accepted by ``ok``."""
    vertices = sorted(vertices)
    adj = defaultdict(set)
    level = []
    for i, u in enumerate(vertices):
        level.append((u,))
        for w in vertices[i + 1 :]:
            if ok((u, w)):
                adj[u].add(w)
                adj[w].add(u)
    faces = set(level)
    edges = [(u, w) for u in vertices for w in sorted(adj[u]) if w > u]
    faces.update(edges)
    level = edges
    size = 2
    while level and size < max_size:
        nxt = []
        for s in level:
            common = set.intersection(*(adj[x] for x in s))
            for w in sorted(common):
                if w > s[-1] and ok(s + (w,)):
                    nxt.append(s + (w,))
        faces.update(nxt)
        level = nxt
        size += 1
    return faces


def truncated_Bn(n: int, bound: int, link_prefix: int = 0) -> SimplicialComplex:
    """Primitive vectors of max-norm <= bound; a set is a simplex iff together
    with e_1..e_k it spans a direct summand of the matching rank.

    ``link_prefix = k > 0`` gives the link of {e_1, ..., e_k}.
    """
    if n < 1 or bound < 1 or not 0 <= link_prefix < n:
        raise ValueError("need n >= 1, bound >= 1 and 0 <= link_prefix < n")
    k = link_prefix
    basis = [tuple(int(i == j) for j in range(n)) for i in range(k)]

    def ok(vs):
        return spans_direct_summand(basis + list(vs))

    verts = [v for v in primitive_vectors(n, bound) if v not in basis and ok((v,))]
    return SimplicialComplex(frozenset(_build_levels(verts, ok, n - k)))


def star_link(X: SimplicialComplex, delta: Sequence) -> tuple[SimplicialComplex, SimplicialComplex]:
    """Star and link of ``delta``; the empty simplex has star = link = X."""
    if not delta:
        return X, X
    d = simplex(delta)
    if d not in X.simplices:
        raise ValueError(f"{d} is not a simplex of the complex")
    ds = set(d)
    star = frozenset(s for s in X.simplices if simplex(ds.union(s)) in X.simplices)
    link = frozenset(s for s in star if ds.isdisjoint(s))
    return SimplicialComplex(star), SimplicialComplex(link)


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"degree": self.degree, "betti": self.betti, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = [f"Z^{self.betti}"] if self.betti else []
        parts += [f"Z/{t}" for t in self.torsion]
        return f"H_{self.degree} = " + (" + ".join(parts) if parts else "0")


def boundary_columns(X: SimplicialComplex, dim: int) -> tuple[list[dict[int, int]], int]:
    """Sparse boundary matrix d_dim: C_dim -> C_{dim-1} as a list of columns."""
    rows = {s: i for i, s in enumerate(X.faces(dim - 1))} if dim > 0 else {}
    cols = []
    for s in X.faces(dim):
        col = {}
        if dim > 0:
            for i in range(len(s)):
                col[rows[s[:i] + s[i + 1 :]]] = -1 if i % 2 else 1
        cols.append(col)
    return cols, len(rows)


def _rank_and_torsion(cols: list[dict[int, int]]) -> tuple[int, list[int]]:
    """Rank and invariant factors > 1 of a sparse integer matrix.

    Unit pivots are eliminated sparsely (exact, since they divide everything);
    whatever is left is handed to the dense invariant-factor routine.
    """
    cols = [dict(c) for c in cols if c]
    alive = set(range(len(cols)))
    by_row: dict[int, set[int]] = defaultdict(set)
    for j, c in enumerate(cols):
        for r in c:
            by_row[r].add(j)
    rank = 0
    changed = True
    while changed:
        changed = False
        for j in sorted(alive, key=lambda j: len(cols[j])):
            if j not in alive:
                continue
            col = cols[j]
            units = [r for r, x in col.items() if abs(x) == 1]
            if not units:
                continue
            r = min(units, key=lambda r: len(by_row[r]))
            p = col[r]
            for j2 in list(by_row[r]):
                if j2 == j:
                    continue
                c2 = cols[j2]
                q = c2[r] * p  # p = +-1 so c2[r]/p = c2[r]*p
                for rr, x in col.items():
                    y = c2.get(rr, 0) - q * x
                    if y:
                        if rr not in c2:
                            by_row[rr].add(j2)
                        c2[rr] = y
                    elif rr in c2:
                        del c2[rr]
                        by_row[rr].discard(j2)
                if not c2:
                    alive.discard(j2)
            for rr in col:
                by_row[rr].discard(j)
            alive.discard(j)
            rank += 1
            changed = True
    rest = [cols[j] for j in sorted(alive) if cols[j]]
    if not rest:
        return rank, []
    row_ids = sorted({r for c in rest for r in c})
    pos = {r: i for i, r in enumerate(row_ids)}
    dense = [[0] * len(rest) for _ in row_ids]
    for j, c in enumerate(rest):
        for r, x in c.items():
            dense[pos[r]][j] = x
    factors = invariant_factors(dense)
    return rank + len(factors), [f for f in factors if f > 1]


def homology(X: SimplicialComplex, max_degree: int | None = None, reduced: bool = False) -> list[HomologyGroup]:
    """Integral homology in degrees 0..max_degree (zeros above the dimension)."""
    top = X.dimension
    if max_degree is None:
        max_degree = max(top, 0)
    counts = {d: len(X.faces(d)) for d in range(0, max(top, max_degree) + 2)}
    ranks, torsion = {}, {}
    for d in range(1, min(max_degree + 1, top) + 1):
        cols, _ = boundary_columns(X, d)
        ranks[d], torsion[d] = _rank_and_torsion(cols)
    out = []
    for d in range(max_degree + 1):
        if d > top:
            out.append(HomologyGroup(d, 0))
            continue
        r_in = ranks.get(d, 0)
        if d + 1 <= top and d + 1 not in ranks:
            cols, _ = boundary_columns(X, d + 1)
            ranks[d + 1], torsion[d + 1] = _rank_and_torsion(cols)
        r_out = ranks.get(d + 1, 0)
        betti = counts[d] - r_in - r_out
        if reduced and d == 0 and counts[0]:
            betti -= 1
        out.append(HomologyGroup(d, betti, tuple(torsion.get(d + 1, []))))
    return out


def _fmt_vertex(v) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


def format_complex(X: SimplicialComplex) -> str:
    """One maximal simplex per line, vertices as ``(a,b,c)``; lines sorted."""
    lines = sorted(" ".join(_fmt_vertex(v) for v in s) for s in X.maximal_simplices())
    return "\n".join(lines)


def parse_complex(text: str) -> SimplicialComplex:
    sims = []
    for line in text.strip().splitlines():
        vs = re.findall(r"\(([^)]*)\)", line)
        if vs:
            sims.append([tuple(int(x) for x in v.split(",")) for v in vs])
    return SimplicialComplex.from_simplices(sims)
