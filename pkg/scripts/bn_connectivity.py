"""Homology of max-norm truncations of B_n(Z) and of links of e_1..e_k.

Everything printed is evidence at a stated truncation bound, not a proof
about the infinite complex.
"""

import argparse
import time
from dataclasses import dataclass, fields

from autfn.zcomplex import homology, truncated_Bn


def report(n, bound, link=0, max_degree=None):
    t = time.perf_counter()
    X = truncated_Bn(n, bound, link)
    H = homology(X, max_degree)
    dt = time.perf_counter() - t
    faces = [len(X.faces(d)) for d in range(X.dimension + 1)]
    span = "e_1" if link == 1 else f"e_1..e_{link}"
    what = f"B_{n}(Z)" + (f" link({span})" if link else "")
    groups = ", ".join(str(g) for g in H)
    print(f"{what:24s} bound {bound}: faces {faces}; {groups}  [{dt:.1f}s]")


@dataclass
class Config:
    max_bound_2: int = 5  # largest bound for n = 2
    max_bound_3: int = 2  # largest bound for n = 3; 2 takes a few seconds


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for f in fields(Config):
        ap.add_argument("--" + f.name.replace("_", "-"), type=int, default=f.default)
    cfg = Config(**vars(ap.parse_args()))
    for b in range(1, cfg.max_bound_2 + 1):
        report(2, b)
    for b in range(1, cfg.max_bound_3 + 1):
        # degrees 0 and 1 are the ones bearing on 1-connectivity
        report(3, b, max_degree=1)
        report(3, b, link=1)
    print("note: truncations only; connectivity of the infinite complex is not decided here")


if __name__ == "__main__":
    main()
