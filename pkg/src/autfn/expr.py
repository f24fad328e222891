"""A small language for words in automorphism generators.

Examples::

    M(v1, v2)                  v1 -> v2 v1
    C(c, a)^-1 K(c, a, b)      K(c, a, b) = M(c, [a, b])
    (C(c, a)^e C(c, x)^d)^e    exponents may be sign variables
    [M(b, a^-1), M(c, b^-1)]   group commutator g h g^-1 h^-1
    W(a, b)^4

Juxtaposition is composition (``A B`` applies ``B`` first).  Generator
arguments are words: letters ``v3``, ``v3^-1``, bound variables ``a^e``,
commutators ``[a, b]`` and juxtaposed products of these.  ``1`` is the
identity in both automorphism and word position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from . import automorphism as aut
from .automorphism import FreeAutomorphism
from .free_group import Word, commutator, identity_word, letter

__all__ = ["Expr", "parse_expr", "evaluate", "GENERATORS"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9']*)|(.))")

GENERATORS = {"M", "Mp", "C", "K", "Kp", "W", "I"}
_ARITY = {"M": 2, "Mp": 2, "C": 2, "K": 3, "Kp": 3, "W": 2, "I": 1}
_LETTER = re.compile(r"^v(\d+)$")


def _tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        tok = m.group(1) or m.group(2) or m.group(3)
        if tok is None:
            break
        if tok.strip():
            out.append(tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ValueError(f"expected {want or 'token'} at position {self.i} in {self.text!r}, got {tok!r}")
        self.i += 1
        return tok

    def exponent(self):
        self.take("^")
        neg = False
        if self.peek() == "-":
            self.take()
            neg = True
        tok = self.take()
        if tok.isdigit():
            val = int(tok)
            return ("int", -val if neg else val)
        return ("var", tok, -1 if neg else 1)

    # automorphism level
    def expr(self, stop=(None, ")", ",", "]")):
        terms = []
        while self.peek() not in stop:
            terms.append(self.term())
        return ("seq", terms)

    def term(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            node = self.expr()
            self.take(")")
        elif tok == "[":
            self.take()
            g = self.expr()
            self.take(",")
            h = self.expr()
            self.take("]")
            node = ("comm", g, h)
        elif tok == "1":
            self.take()
            node = ("seq", [])
        elif tok in GENERATORS:
            name = self.take()
            self.take("(")
            args = [self.word()]
            while self.peek() == ",":
                self.take()
                args.append(self.word())
            self.take(")")
            if len(args) != _ARITY[name]:
                raise ValueError(f"{name} takes {_ARITY[name]} arguments")
            node = ("gen", name, args)
        else:
            raise ValueError(f"unexpected token {tok!r} in {self.text!r}")
        if self.peek() == "^":
            node = ("pow", node, self.exponent())
        return node

    # word level
    def word(self):
        factors = []
        while self.peek() not in (")", ",", "]", None):
            factors.append(self.wfactor())
        if not factors:
            raise ValueError(f"empty word argument in {self.text!r}")
        return ("wseq", factors)

    def wfactor(self):
        tok = self.peek()
        if tok == "[":
            self.take()
            g = self.word()
            self.take(",")
            h = self.word()
            self.take("]")
            node = ("wcomm", g, h)
        elif tok == "1":
            self.take()
            node = ("wseq", [])
        elif tok is not None and re.match(r"^[A-Za-z_]", tok) and tok not in GENERATORS:
            self.take()
            node = ("letter", tok)
        else:
            raise ValueError(f"unexpected token {tok!r} in word of {self.text!r}")
        if self.peek() == "^":
            node = ("wpow", node, self.exponent())
        return node


@dataclass(frozen=True)
class Expr:
    """A parsed generator expression, evaluated against variable bindings."""

    text: str
    tree: tuple = field(repr=False, compare=False)

    def letters(self) -> set[str]:
        """Letter variable names referenced (concrete ``v<i>`` excluded)."""
        out: set[str] = set()

        def walk(node):
            if isinstance(node, tuple):
                if node[0] == "letter" and not _LETTER.match(node[1]):
                    out.add(node[1])
                for child in node[1:]:
                    walk(child)
            elif isinstance(node, list):
                for child in node:
                    walk(child)

        walk(self.tree)
        return out

    def __call__(self, rank: int, env: Mapping[str, int] | None = None, reading: str = "left"):
        return evaluate(self, rank, env, reading)


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    tree = p.expr()
    if p.peek() is not None:
        raise ValueError(f"trailing input {p.peek()!r} in {text!r}")
    return Expr(text, tree)


def _exp(node, env) -> int:
    if node[0] == "int":
        return node[1]
    _, name, sign = node
    if name not in env:
        raise ValueError(f"unbound exponent variable {name!r}")
    return sign * env[name]


def _word(node, rank: int, env) -> Word:
    kind = node[0]
    if kind == "wseq":
        out = identity_word(rank)
        for f in node[1]:
            out = out * _word(f, rank, env)
        return out
    if kind == "letter":
        m = _LETTER.match(node[1])
        if m:
            return letter(int(m.group(1)), rank)
        if node[1] not in env:
            raise ValueError(f"unbound letter variable {node[1]!r}")
        return letter(env[node[1]], rank)
    if kind == "wcomm":
        return commutator(_word(node[1], rank, env), _word(node[2], rank, env))
    if kind == "wpow":
        return _word(node[1], rank, env) ** _exp(node[2], env)
    raise AssertionError(kind)


def _single(w: Word) -> int:
    if len(w) != 1:
        raise ValueError(f"expected a single letter, got {w}")
    return w.letters[0]


def _eval(node, rank: int, env, reading: str) -> FreeAutomorphism:
    kind = node[0]
    if kind == "seq":
        out = aut.identity(rank)
        for t in node[1]:
            out = aut.compose(out, _eval(t, rank, env, reading))
        return out
    if kind == "pow":
        return aut.power(_eval(node[1], rank, env, reading), _exp(node[2], env))
    if kind == "comm":
        g = _eval(node[1], rank, env, reading)
        h = _eval(node[2], rank, env, reading)
        return aut.compose_all([g, h, aut.invert_aut(g), aut.invert_aut(h)], rank)
    name, args = node[1], [_word(a, rank, env) for a in node[2]]
    if name == "M":
        return aut.mul(_single(args[0]), args[1], rank)
    if name == "Mp":
        return aut.mul_right(_single(args[0]), args[1], rank)
    if name == "C":
        return aut.con(_single(args[0]), args[1], rank)
    if name in ("K", "Kp"):
        right = (name == "Kp") != (reading == "right")
        build = aut.mul_right if right else aut.mul
        return build(_single(args[0]), commutator(args[1], args[2]), rank)
    if name == "W":
        return aut.swap(_single(args[0]), _single(args[1]), rank)
    if name == "I":
        return aut.invert_letter(_single(args[0]), rank)
    raise AssertionError(name)


def evaluate(
    expr: Expr | str, rank: int, env: Mapping[str, int] | None = None, reading: str = "left"
) -> FreeAutomorphism:
    """Evaluate to an automorphism of F_rank.

    ``reading`` selects what ``K(c, a, b)`` means: ``"left"`` is
    ``M(c, [a, b])`` (c -> [a,b] c), ``"right"`` is ``Mp(c, [a, b])``
    (c -> c [a,b]).  ``Kp`` always means the opposite reading of ``K``.
    """
    if reading not in ("left", "right"):
        raise ValueError("reading must be 'left' or 'right'")
    if isinstance(expr, str):
        expr = parse_expr(expr)
    return _eval(expr.tree, rank, dict(env or {}), reading)
