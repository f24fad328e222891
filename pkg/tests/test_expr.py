import pytest

from autfn import automorphism as aut
from autfn.expr import evaluate, parse_expr
from autfn.free_group import commutator, letter, parse_word

N = 4


def L(i):
    return letter(i, N)


def test_generators_match_constructors():
    assert aut.equals(evaluate("M(v1, v2)", N), aut.mul(1, L(2), N))
    assert aut.equals(evaluate("Mp(v1, v2^-1)", N), aut.mul_right(1, L(-2), N))
    assert aut.equals(evaluate("C(v3, v1 v2)", N), aut.con(3, parse_word("v1 v2", N), N))
    assert aut.equals(evaluate("W(v1, v2^-1)", N), aut.swap(1, -2, N))
    assert aut.equals(evaluate("I(v4)", N), aut.invert_letter(4, N))


def test_juxtaposition_applies_right_factor_first():
    f = evaluate("M(v1, v2) C(v2, v3)", N)
    g = aut.compose(aut.mul(1, L(2), N), aut.con(2, L(3), N))
    assert aut.equals(f, g)


def test_k_reading():
    comm = commutator(L(2), L(3))
    assert aut.equals(evaluate("K(v1, v2, v3)", N), aut.mul(1, comm, N))
    assert aut.equals(evaluate("K(v1, v2, v3)", N, reading="right"), aut.mul_right(1, comm, N))
    assert aut.equals(evaluate("Kp(v1, v2, v3)", N), aut.mul_right(1, comm, N))
    with pytest.raises(ValueError):
        evaluate("K(v1, v2, v3)", N, reading="sideways")


def test_variables_signs_and_powers():
    env = {"a": 2, "b": -3, "e": -1}
    f = evaluate("(C(c, a)^e M(a, b))^-e", N, {**env, "c": 1})
    g = aut.compose(aut.power(aut.con(1, L(2), N), -1), aut.mul(2, L(-3), N))
    assert aut.equals(f, g)
    assert aut.equals(evaluate("M(a^e, b)", N, env), aut.mul(-2, L(-3), N))


def test_commutator_and_identity():
    f = evaluate("[M(v1, v2), C(v3, v1)]", N)
    g, h = aut.mul(1, L(2), N), aut.con(3, L(1), N)
    assert aut.equals(f, aut.compose_all([g, h, aut.invert_aut(g), aut.invert_aut(h)], N))
    assert aut.equals(evaluate("1", N), aut.identity(N))
    assert aut.equals(evaluate("M(v1, 1)", N), aut.identity(N))


def test_letters():
    assert parse_expr("C(x, c) K(c, a, b)^e").letters() == {"x", "c", "a", "b"}
    assert parse_expr("M(v1, v2)").letters() == set()


@pytest.mark.parametrize(
    "bad",
    ["M(v1)", "M(v1, v2", "Q(v1, v2)", "M(v1, v2) )", "M(, v2)", "M(v1, v2)^"],
)
def test_parse_errors(bad):
    with pytest.raises(ValueError):
        parse_expr(bad)


def test_unbound_variable():
    with pytest.raises(ValueError):
        evaluate("M(a, v2)", N)
