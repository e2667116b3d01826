from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from prorank.errors import FormulaSyntaxError
from prorank.fol.parser import parse_formula, parse_term
from prorank.fol.prefix import prefix_class
from prorank.fol.schemas import build_beta1, build_gamma, build_quotient_iso_sentence
from prorank.fol.syntax import And, Eq, Exists, Forall, Implies, Inv, Mul, Not, One, Or, Pow, Var, \
    alpha_equal, commutator, format_formula, free_vars, is_sentence, quantifier_depth, rename_bound, \
    fresh_names, size
from prorank.spec import cyclic

VARS = ["x", "y", "z", "a", "b"]


def terms(depth=3):
    leaf = st.one_of(st.sampled_from(VARS).map(Var), st.just(One()))
    if depth == 0:
        return leaf
    sub = terms(depth - 1)
    return st.one_of(
        leaf,
        st.builds(Mul, sub, sub),
        st.builds(Inv, sub),
        st.builds(Pow, sub, st.integers(-5, 12).filter(lambda k: k not in (-1,))),
        st.builds(commutator, sub, sub),
    )


def formulas(depth=5):
    atom = st.builds(Eq, terms(2), terms(2))
    if depth == 0:
        return atom
    sub = formulas(depth - 1)
    return st.one_of(
        atom,
        st.builds(Not, sub),
        st.builds(lambda a, b: And((a, b)), sub, sub),
        st.builds(lambda a, b: Or((a, b)), sub, sub),
        st.builds(Implies, sub, sub),
        st.builds(Exists, st.sampled_from(VARS), sub),
        st.builds(Forall, st.sampled_from(VARS), sub),
    )


def test_parse_examples():
    f = parse_formula("A x . A y . x*y = y*x")
    assert isinstance(f, Forall) and isinstance(f.body, Forall) and isinstance(f.body.body, Eq)
    assert is_sentence(f) and str(prefix_class(f)) == "∀"
    g = parse_formula("E a . A x . E z . [x,a] = z^2")
    assert str(prefix_class(g)) == "∃∀∃"
    assert g.body.body.body.left == commutator(Var("x"), Var("a"))


def test_syntax_error_offset():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("x*(y")
    assert exc.value.position == 4
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("A . x = x")
    assert exc.value.position == 2


@pytest.mark.parametrize("text", ["", "x =", "E x x = 1", "x = y)", "[x y] = 1", "x ^ = 1", "x = 1 &"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_free_variables_are_not_errors():
    f = parse_formula("x = y")
    assert free_vars(f) == {"x", "y"} and not is_sentence(f)


def test_sugar_and_precedence():
    f = parse_formula("x = 1 | y = 1 & z = 1 -> !x = y")
    assert isinstance(f, Implies) and isinstance(f.left, Or) and isinstance(f.right, Not)
    assert parse_term("x^-1") == Inv(Var("x"))
    assert parse_term("x^0") == Pow(Var("x"), 0)
    assert parse_term("x*y*z") == Mul(Mul(Var("x"), Var("y")), Var("z"))


def test_comments_are_ignored():
    f = parse_formula("# a comment\nA x . x = x  # trailing\n")
    assert f == Forall("x", Eq(Var("x"), Var("x")))


@given(formulas())
def test_print_parse_round_trip(f):
    assert alpha_equal(parse_formula(format_formula(f)), f)


@given(formulas())
def test_prefix_class_invariant_under_renaming(f):
    g = rename_bound(f, fresh_names(set(VARS), "w"))
    assert alpha_equal(f, g)
    assert prefix_class(f) == prefix_class(g)
    assert free_vars(f) == free_vars(g)


@pytest.mark.parametrize("sentence", [
    build_gamma(2), build_gamma(6), build_beta1([2], 2), build_beta1([2, 3], 3),
    build_quotient_iso_sentence(cyclic(3), parse_formula("E y . x = y*y")),
    build_quotient_iso_sentence(cyclic(2), parse_formula("x = x")),
])
def test_schema_round_trip(sentence):
    assert alpha_equal(parse_formula(format_formula(sentence)), sentence)
    assert is_sentence(sentence)


def test_prefix_classes():
    assert prefix_class(parse_formula("x*y = y*x")).blocks == ()
    assert prefix_class(build_beta1([2], 2)).blocks == ("E", "A", "E")
    assert prefix_class(build_beta1([3, 5], 1)).blocks == ("E", "A", "E")
    assert prefix_class(build_gamma(1)).blocks == ("A", "E")
    quantifier_free_phi = parse_formula("x*x = 1")
    assert prefix_class(build_quotient_iso_sentence(cyclic(2), quantifier_free_phi)).blocks == ("E", "A")
    ex_phi = parse_formula("E y . x = y*y")
    assert prefix_class(build_quotient_iso_sentence(cyclic(2), ex_phi)).blocks == ("E", "A", "E")


def test_prefix_of_negation_and_implication():
    assert prefix_class(parse_formula("!(E x . x = 1)")).blocks == ("A",)
    assert prefix_class(parse_formula("(A x . x = 1) -> E y . y = 1")).blocks == ("E",)


def test_size_and_depth():
    f = parse_formula("A x . E y . x = y")
    assert quantifier_depth(f) == 2 and size(f) == 5
