from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import commutators, d_of, power, table_of
from prorank.config import Caps
from prorank.errors import Undecided, UnsupportedSchema
from prorank.fol.fast import eval_fast, recognize
from prorank.fol.naive import NaiveEvaluator, eval_naive
from prorank.fol.parser import parse_formula
from prorank.fol.schemas import build_beta1, build_gamma, build_quotient_iso_sentence, build_theta, q_of
from prorank.fol.syntax import And
from prorank.invariants import is_semi_powerful, min_generators
from prorank.spec import abelian, cyclic
from strategies import corpus_groups, small_corpus

COMM = parse_formula("A x . A y . x*y = y*x")
SQ = parse_formula("E y . x = y*y")


def test_naive_examples(named):
    assert eval_naive(cyclic(6), COMM)
    assert not eval_naive(named.S3(), COMM)
    assert eval_naive(abelian([2, 2]), parse_formula("A x . x^2 = 1"))
    assert not eval_naive(cyclic(4), parse_formula("A x . x^2 = 1"))


def test_naive_counterexample_is_reported(named):
    G = named.S3()
    out = NaiveEvaluator(G).run(COMM, want_witness=True)
    assert out.value is False and out.witness_kind == "counterexample"
    x, y = out.witness["x"], out.witness["y"]
    assert int(G.mul(x, y)) != int(G.mul(y, x))


def test_naive_witness_for_existential():
    G = cyclic(8)
    out = NaiveEvaluator(G).run(parse_formula("E g . g^4 = 1 & !g^2 = 1"), want_witness=True)
    assert out.value and out.witness_kind == "witness"
    g = out.witness["g"]
    assert G.element_orders[g] == 4


def test_naive_free_variables_from_env():
    G = cyclic(4)
    assert eval_naive(G, SQ, {"x": 2}) and not eval_naive(G, SQ, {"x": 1})


def test_naive_step_cap():
    deep = parse_formula("A a . A b . A c . A d . A e . (a*b)*(c*d)*e = a*(b*(c*(d*e)))")
    with pytest.raises(Undecided) as exc:
        eval_naive(cyclic(20), deep, caps=Caps(steps=100_000))
    assert exc.value.cap == "steps"
    assert eval_naive(cyclic(20), deep, caps=Caps(steps=10**8))


def test_naive_short_circuit_keeps_cheap_formulas_under_cap():
    # the first conjunct is false for every x, so the deep part is never expanded
    f = parse_formula("A x . !x = x & (A a . A b . A c . A d . a*b*c*d = d*c*b*a)")
    assert not eval_naive(cyclic(30), f, caps=Caps(steps=10**5))


def test_fast_examples(named):
    assert eval_fast(abelian([2, 2]), build_beta1([2], 2))
    assert not eval_fast(named.Q8(), build_gamma(2))
    with pytest.raises(UnsupportedSchema):
        eval_fast(cyclic(4), parse_formula("A x . E y . x = y*y*y"))
    with pytest.raises(UnsupportedSchema):
        eval_fast(cyclic(4), COMM)


def test_fast_accepts_conjunctions():
    f = And((build_gamma(2), build_beta1([2], 1)))
    assert recognize(f).kind == "and"
    assert eval_fast(cyclic(8), f) == eval_naive(cyclic(8), f)
    assert not eval_fast(abelian([2, 2]), f)


def test_beta1_examples():
    assert eval_fast(abelian([2, 2]), build_beta1([2], 2))
    assert not eval_fast(abelian([2, 2, 2]), build_beta1([2], 2))
    assert eval_fast(cyclic(1), build_beta1([5], 1))
    assert eval_naive(cyclic(1), build_beta1([5], 1))


def test_gamma_examples(named):
    assert eval_fast(abelian([3, 9]), build_gamma(4))
    assert not eval_naive(named.Q8(), build_gamma(2))
    S3 = named.S3()
    T = table_of(S3)
    powers = {power(T, x, 6) for x in range(6)}
    assert eval_naive(S3, build_gamma(3)) == is_semi_powerful(S3, 3) == (commutators(T) <= powers)


def test_quotient_iso_examples(named):
    C2 = cyclic(2)
    assert eval_naive(cyclic(4), build_quotient_iso_sentence(C2, SQ))
    assert not eval_naive(cyclic(3), build_quotient_iso_sentence(C2, SQ))
    for G in (named.S3(), cyclic(5), named.Q8()):
        assert eval_naive(G, build_quotient_iso_sentence(cyclic(1), parse_formula("x = x")))


def test_q_of():
    assert q_of([2]) == 2 and q_of([2, 3]) == 6 and q_of([5, 3, 2]) == 30


@given(corpus_groups(16), st.sampled_from([1, 2, 3]))
def test_gamma_fast_agrees_with_naive(G, q):
    assert eval_fast(G, build_gamma(q)) == eval_naive(G, build_gamma(q))


@given(corpus_groups(16), st.sampled_from(["x = x", "x = 1", "E y . x = y*y", "x*x = 1",
                                           "E y . E z . x = [y, z]", "A y . x*y = y*x"]),
       st.sampled_from([1, 2]))
def test_quotient_iso_fast_agrees_with_naive(G, phi, n):
    s = build_quotient_iso_sentence(cyclic(n), parse_formula(phi))
    assert eval_fast(G, s) == eval_naive(G, s)


@given(corpus_groups(8), st.sampled_from([1, 2]))
@settings(max_examples=20)
def test_beta1_fast_agrees_with_naive(G, r):
    s = build_beta1(G.primes or [2], r)
    assert eval_fast(G, s) == eval_naive(G, s, caps=Caps(steps=10**10))


NILPOTENT_PI = [G for G in small_corpus(64, (2, 3)) if G.is_nilpotent]


@pytest.mark.parametrize("G", NILPOTENT_PI, ids=lambda G: G.label)
def test_beta1_contract(G):
    d = min_generators(G)
    for r in (1, 2, 3):
        assert eval_fast(G, build_beta1([2, 3], r)) == (d <= r)
        if G.primes:
            assert eval_fast(G, build_beta1(G.primes, r)) == (d <= r)


def test_beta1_contract_against_exhaustive_d():
    for G in small_corpus(16, (2,)):
        d = d_of(table_of(G), frozenset(range(G.order)))
        assert eval_fast(G, build_beta1([2], 2)) == (d <= 2)


def test_theta_materialized_disjunction(named):
    phi = parse_formula("E y . x = y*y")
    theta = build_theta(phi, [cyclic(2), abelian([2, 2])])
    assert eval_naive(cyclic(4), theta)
    assert eval_naive(named.Q8(), theta)
    assert not eval_naive(cyclic(3), theta)
    assert eval_fast(named.Q8(), theta) and recognize(theta).kind == "or"
