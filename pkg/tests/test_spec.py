from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from oracles import closure, table_of
from prorank.config import Caps
from prorank.errors import SpecError, Undecided
from prorank.isomorphism import is_isomorphic
from prorank.spec import CayleySpec, CyclicSpec, PermutationSpec, ProductSpec, SemidirectSpec, \
    dump_group_file, elaborate, load_group_file, parse_permutation, spec_from_json, spec_to_json


def perm_closure_order(degree, gens):
    """Breadth-first closure of permutation tuples."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[x[i]] for i in range(degree))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def test_elaborate_trivial():
    assert elaborate(CyclicSpec(1)).order == 1


def test_elaborate_permutations():
    gens = (parse_permutation("(0 1)", 3), parse_permutation("(0 1 2)", 3))
    G = elaborate(PermutationSpec(3, gens))
    assert G.order == 6 == perm_closure_order(3, gens)
    assert not G.is_abelian


def test_elaborate_semidirect_negation():
    G = elaborate(SemidirectSpec(2, (3, 3), ((-1 % 3, 0), (0, -1 % 3))))
    assert G.order == 18 and not G.is_abelian
    # every element outside the base inverts it, so there are 9 involutions
    assert int((G.element_orders == 2).sum()) == 9


def test_semidirect_rejects_non_automorphism():
    with pytest.raises(SpecError):
        elaborate(SemidirectSpec(2, (3, 3), ((1, 0), (0, 0))))


def test_semidirect_rejects_incompatible_order():
    # the Jordan block has order 3 on C3^2, which does not divide 2
    with pytest.raises(SpecError):
        elaborate(SemidirectSpec(2, (3, 3), ((1, 0), (1, 1))))


def test_order_cap():
    with pytest.raises(Undecided) as exc:
        elaborate(CyclicSpec(5000), Caps(order=2000))
    assert exc.value.cap == "order"


def test_parse_permutation_forms():
    assert parse_permutation("(0 1 2)", 4) == (1, 2, 0, 3)
    assert parse_permutation([1, 0, 2], 3) == (1, 0, 2)
    assert parse_permutation("(0 1)(2 3)", 4) == (1, 0, 3, 2)
    with pytest.raises(SpecError):
        parse_permutation([0, 0, 1], 3)
    with pytest.raises(SpecError):
        parse_permutation("(0 1)(1 2)", 3)


@st.composite
def specs(draw, depth=2):
    kind = draw(st.sampled_from(["cyclic", "perm", "semi", "product"] if depth else ["cyclic", "perm"]))
    if kind == "cyclic":
        return CyclicSpec(draw(st.integers(1, 12)))
    if kind == "perm":
        deg = draw(st.integers(1, 4))
        gens = draw(st.lists(st.permutations(list(range(deg))), min_size=0, max_size=2))
        return PermutationSpec(deg, tuple(tuple(g) for g in gens))
    if kind == "semi":
        p = draw(st.sampled_from([3, 5, 7]))
        return SemidirectSpec(2, (p,), ((p - 1,),))
    return ProductSpec(tuple(draw(st.lists(specs(depth=depth - 1), min_size=1, max_size=2))))


@given(specs())
def test_spec_json_round_trip(spec):
    back = spec_from_json(json.loads(json.dumps(spec_to_json(spec))))
    assert back == spec
    G, H = elaborate(spec), elaborate(back)
    assert G.order == H.order and is_isomorphic(G, H)


@given(specs())
def test_permutation_spec_matches_bfs(spec):
    G = elaborate(spec)
    if isinstance(spec, PermutationSpec):
        assert G.order == perm_closure_order(spec.degree, spec.generators)
    G.validate()


def test_group_file_round_trip(tmp_path):
    spec = ProductSpec((CyclicSpec(4), SemidirectSpec(2, (3,), ((2,),))))
    path = tmp_path / "g.group"
    dump_group_file(path, spec, "C4xS3")
    G = load_group_file(path)
    assert G.order == 24 and G.label == "C4xS3"
    doc = json.loads(path.read_text())
    assert doc["format_version"] == 1


def test_group_file_cayley(tmp_path):
    T = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    path = tmp_path / "c3.group"
    dump_group_file(path, CayleySpec(T))
    G = load_group_file(path)
    assert table_of(G) == [list(r) for r in T]
    assert closure(table_of(G), [1]) == {0, 1, 2}


@pytest.mark.parametrize("text", ["{", '{"spec": {"type": "nope"}}', '{"format_version": 9, "spec": {"type": "cyclic", "n": 2}}',
                                  '{"label": "x"}', '{"spec": {"type": "cyclic"}}'])
def test_group_file_errors(tmp_path, text):
    path = tmp_path / "bad.group"
    path.write_text(text)
    with pytest.raises(SpecError):
        load_group_file(path)
