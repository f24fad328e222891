"""Command line front end.

Exit codes: 0 all checks passed, 1 verification failures, 2 usage or input
error.  Reports go to stdout and are deterministic; timings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import automorphism as aut
from .birman import StabilizerContext, is_in_kernel, kernel_generators, phi_basis_factors, phi_hom_image, verify_birman_diagram
from .expr import evaluate, parse_expr
from .free_group import parse_word
from .matrix import parse_matrix
from .relations import Failure, VerificationReport, verify_edge_property, verify_gersten, verify_identities, verify_table1
from .zcomplex import format_complex, homology, truncated_Bn

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(payload: dict | str, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(payload)


def _report(rep: VerificationReport, args) -> int:
    _emit(rep.to_dict() if args.json else rep.to_text(), args.json)
    return EXIT_OK if rep.ok else EXIT_FAIL


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# subcommands


def cmd_verify_gersten(args) -> int:
    if args.rank < 3:
        raise UsageError("presentation requires n >= 3")
    return _report(verify_gersten(args.rank, jobs=args.jobs), args)


def cmd_verify_table(args) -> int:
    if args.rank < 4:
        raise UsageError("table rows need four distinct letters: rank >= 4")
    if args.defaults and args.default_rank < 5:
        raise UsageError("default cases need --default-rank >= 5")
    rep = verify_table1(args.rank, args.defaults, args.default_rank, reading=args.reading, jobs=args.jobs)
    return _report(rep, args)


def cmd_verify_identities(args) -> int:
    if args.rank < 3:
        raise UsageError("identities need rank >= 3")
    return _report(verify_identities(args.rank, jobs=args.jobs), args)


def cmd_verify_edge_property(args) -> int:
    if args.rank < 2:
        raise UsageError("edge property needs rank >= 2")
    return _report(verify_edge_property(args.rank), args)


def _context(args) -> StabilizerContext:
    try:
        return StabilizerContext(args.rank, args.prefix)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_kernel_check(args) -> int:
    ctx = _context(args)
    if args.aut:
        phi = aut.parse_automorphism(_read(args.aut))
        if phi.rank != ctx.n:
            raise UsageError(f"automorphism has rank {phi.rank}, expected {ctx.n}")
        chk = is_in_kernel(phi, ctx)
        payload = {"n": ctx.n, "k": ctx.k, "in_kernel": chk.in_kernel, "conditions": chk.records()}
        if chk.in_kernel:
            payload["phi"] = [list(r) for r in phi_hom_image(phi, ctx).entries]
        if args.json:
            _emit(payload, True)
        else:
            lines = [f"kernel check n={ctx.n} k={ctx.k}: {'in kernel' if chk.in_kernel else 'NOT in kernel'}"]
            for r in chk.records():
                lines.append(f"  {r['condition']} v{r['index']}: {'ok' if r['ok'] else 'violated'}")
            if chk.in_kernel:
                lines.append("  Phi block:")
                lines.extend("    " + " ".join(str(x) for x in r) for r in payload["phi"])
            _emit("\n".join(lines), False)
        return EXIT_OK if chk.in_kernel else EXIT_FAIL
    # no automorphism given: check every kernel generator and the Phi basis
    fails, total = [], 0
    for label, phi in kernel_generators(ctx):
        total += 1
        chk = is_in_kernel(phi, ctx)
        if not chk.in_kernel:
            fails.append(Failure({"g": label}, None, str(chk.records()), "in kernel"))
    factors = phi_basis_factors(ctx)
    basis = VerificationReport(
        "Phi basis (Smith form = I)",
        1,
        [] if factors == [1] * (ctx.k * ctx.m) else [Failure({}, None, str(factors), "all ones")],
    )
    rep = VerificationReport.combine(
        f"kernel generators n={ctx.n} k={ctx.k}", [VerificationReport("kernel conditions", total, fails), basis]
    )
    return _report(rep, args)


def cmd_birman_diagram(args) -> int:
    return _report(verify_birman_diagram(_context(args)), args)


def cmd_lift_matrix(args) -> int:
    A = parse_matrix(_read(args.file))
    n, c = A.shape
    if n != c or abs(A.det()) != 1:
        raise UsageError("need a square integer matrix with determinant +-1")
    k = args.prefix
    if not 0 <= k <= n:
        raise UsageError("--prefix must lie in 0..n")
    try:
        specs = aut.matrix_factorization(A, fixed_prefix=k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    phi = aut.compose_all([aut.make_generator(g, n) for g in specs], n)
    round_trip = aut.abelianize_aut(phi) == A
    fixed = all(phi.images[i].letters == (i + 1,) for i in range(k))
    ok = round_trip and fixed
    if args.json:
        _emit(
            {
                "rank": n,
                "prefix": k,
                "generators": [str(g) for g in specs],
                "images": [str(w) for w in phi.images],
                "round_trip": round_trip,
                "prefix_fixed": fixed,
                "status": "pass" if ok else "FAIL",
            },
            True,
        )
    else:
        lines = [f"lift of {n}x{n} matrix, prefix {k}: {len(specs)} generators"]
        lines += [f"  {g}" for g in specs]
        lines.append(aut.format_automorphism(phi))
        lines.append(f"abelianization round trip: {'ok' if round_trip else 'FAIL'}")
        if k:
            span = "v1" if k == 1 else f"v1..v{k}"
            lines.append(f"{span} fixed: {'ok' if fixed else 'FAIL'}")
        _emit("\n".join(lines), False)
    return EXIT_OK if ok else EXIT_FAIL


def _sections(text: str) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    cur = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            cur = line[1:-1].strip()
            out[cur] = []
        elif cur is None:
            raise UsageError(f"line outside a section: {raw!r}")
        else:
            out[cur].append(line)
    return out


def cmd_complete_basis(args) -> int:
    """File has sections [certificate] (automorphism), [partial] (one word per
    line) and [targets] (n x (n-k) integer matrix)."""
    sec = _sections(_read(args.file))
    for name in ("certificate", "partial", "targets"):
        if name not in sec:
            raise UsageError(f"missing [{name}] section")
    cert = aut.parse_automorphism("\n".join(sec["certificate"]))
    n = cert.rank
    partial = [parse_word(w, n) for w in sec["partial"]]
    targets = parse_matrix("\n".join(sec["targets"]))
    try:
        phi = aut.basis_completion(partial, cert, targets)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    k = len(partial)
    ab = aut.abelianize_aut(phi)
    ok = tuple(phi.images[:k]) == tuple(partial) and [ab.column(j) for j in range(k, n)] == targets.columns()
    if args.json:
        _emit({"rank": n, "images": [str(w) for w in phi.images], "status": "pass" if ok else "FAIL"}, True)
    else:
        _emit(aut.format_automorphism(phi) + f"\ncompletion check: {'ok' if ok else 'FAIL'}", False)
    return EXIT_OK if ok else EXIT_FAIL


def _bn(args):
    try:
        return truncated_Bn(args.rank, args.bound, args.link)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_bn_build(args) -> int:
    X = _bn(args)
    text = format_complex(X)
    counts = [len(X.faces(d)) for d in range(X.dimension + 1)]
    if args.out:
        Path(args.out).write_text(text + "\n")
        summary = {"rank": args.rank, "bound": args.bound, "link": args.link, "faces": counts, "out": args.out}
        _emit(summary if args.json else f"wrote {args.out}: face counts {counts}", args.json)
    elif args.json:
        _emit({"rank": args.rank, "bound": args.bound, "link": args.link, "faces": counts, "maximal": text.splitlines()}, True)
    else:
        _emit(text, False)
    return EXIT_OK


def cmd_bn_homology(args) -> int:
    X = _bn(args)
    top = X.dimension if args.max_degree is None else args.max_degree
    groups = homology(X, top)
    counts = [len(X.faces(d)) for d in range(X.dimension + 1)]
    note = f"truncation at max-norm bound {args.bound}: evidence about the infinite complex, not a proof"
    span = "e_1" if args.link == 1 else f"e_1..e_{args.link}"
    what = f"B_{args.rank}(Z)" + (f" link of {span}" if args.link else "")
    if args.json:
        _emit(
            {
                "complex": what,
                "rank": args.rank,
                "bound": args.bound,
                "link": args.link,
                "faces": counts,
                "homology": [g.to_dict() for g in groups],
                "note": note,
            },
            True,
        )
    else:
        lines = [f"{what}, bound {args.bound}: face counts {counts}"]
        lines += [f"  {g}" for g in groups]
        lines.append(f"note: {note}")
        _emit("\n".join(lines), False)
    return EXIT_OK


def cmd_word_eval(args) -> int:
    try:
        expr = parse_expr(args.expr)
        if expr.letters():
            raise ValueError(f"unbound variables {sorted(expr.letters())}; use concrete letters v<i>")
        phi = evaluate(expr, args.rank, reading=args.reading)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        _emit({"rank": args.rank, "images": [str(w) for w in phi.images], "class": aut.classify(phi).value}, True)
    else:
        _emit(aut.format_automorphism(phi), False)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for verifiers")

    p = _Parser(prog="autfn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=fn)
        return sp

    sp = add("verify-gersten", cmd_verify_gersten, "check the SAut(F_n) presentation relations")
    sp.add_argument("--rank", type=int, required=True)

    sp = add("verify-table", cmd_verify_table, "check the Magnus conjugation table")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--defaults", action="store_true", help="also check the commuting default cases")
    sp.add_argument("--default-rank", type=int, default=5)
    sp.add_argument("--reading", choices=("left", "right"), default="left")

    sp = add("verify-identities", cmd_verify_identities, "check the auxiliary generator identities")
    sp.add_argument("--rank", type=int, required=True)

    sp = add("verify-edge-property", cmd_verify_edge_property, "check the edge property of the generators")
    sp.add_argument("--rank", type=int, required=True)

    for name, fn, help in (
        ("kernel-check", cmd_kernel_check, "test membership in the Birman kernel"),
        ("birman-diagram", cmd_birman_diagram, "check the stabilizer/kernel/quotient diagram"),
    ):
        sp = add(name, fn, help)
        sp.add_argument("--rank", type=int, required=True)
        sp.add_argument("--prefix", type=int, required=True)
        if name == "kernel-check":
            sp.add_argument("--aut", help="automorphism file (v<i> -> word lines)")

    sp = add("lift-matrix", cmd_lift_matrix, "lift a GL_n(Z) matrix to Aut(F_n)")
    sp.add_argument("--file", required=True)
    sp.add_argument("--prefix", type=int, default=0)

    sp = add("complete-basis", cmd_complete_basis, "complete a certified partial basis")
    sp.add_argument("--file", required=True)

    for name, fn, help in (
        ("bn-build", cmd_bn_build, "build a truncation of B_n(Z)"),
        ("bn-homology", cmd_bn_homology, "integral homology of a truncation of B_n(Z)"),
    ):
        sp = add(name, fn, help)
        sp.add_argument("--rank", type=int, required=True)
        sp.add_argument("--bound", type=int, required=True)
        sp.add_argument("--link", type=int, default=0)
        if name == "bn-build":
            sp.add_argument("--out")
        else:
            sp.add_argument("--max-degree", type=int)

    sp = add("word-eval", cmd_word_eval, "evaluate a generator word, print basis images")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--reading", choices=("left", "right"), default="left")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"[{args.command}] {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
