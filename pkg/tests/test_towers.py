from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from prorank.config import Caps
from prorank.errors import SpecError, Undecided
from prorank.invariants import is_powerful, min_generators, omega1, rank
from prorank.isomorphism import is_isomorphic
from prorank.spec import abelian
from prorank.towers import AbelianTimesTorsion, FamilyProduct, JordanMetabelian, UniformAbelian, \
    check_family, d_stable, dim_analytic, dim_estimate, family_from_json, family_to_json, \
    finite_quotient, frattini_layers, jordan_matrix, level_layers, jordan_order_exponent, load_family_file, \
    omega1_stable, torsion_rank, torsion_spec
from prorank.verify.suites import family_matrix


def brute_order_exponent(p, n, depth):
    """Multiplicative order of the Jordan block by plain repeated multiplication."""
    mod = p ** depth
    J = jordan_matrix(n).astype(object)
    M = J.copy()
    k = 1
    eye = np.eye(n, dtype=object)
    while not ((M % mod) == eye).all():
        M = (M @ J) % mod
        k += 1
    e = 0
    while p ** e < k:
        e += 1
    assert p ** e == k
    return e


@pytest.mark.parametrize("p,n,depth", [(3, 2, 1), (3, 2, 3), (5, 2, 2), (5, 3, 2), (5, 4, 1), (7, 3, 2), (2, 2, 3)])
def test_jordan_order_exponent(p, n, depth):
    assert jordan_order_exponent(p, n, depth) == brute_order_exponent(p, n, depth)


def test_finite_quotient_examples():
    lv = finite_quotient(UniformAbelian(3, 2), 2)
    assert is_isomorphic(lv.group, abelian([9, 9]))
    lv = finite_quotient(JordanMetabelian(5, 2), 1)
    m = jordan_order_exponent(5, 2, 1)
    assert lv.group.order == 5 ** (m + 2)
    assert min_generators(lv.group) == 2
    lv = finite_quotient(AbelianTimesTorsion(2, 1, torsion_spec(2)), 3)
    assert is_isomorphic(lv.group, abelian([8, 2]))


def test_finite_quotient_caps():
    with pytest.raises(Undecided):
        finite_quotient(UniformAbelian(5, 3), 12, Caps(tower_order=10**6))
    with pytest.raises(Undecided):
        finite_quotient(UniformAbelian(2, 1), 13)
    with pytest.raises(SpecError):
        finite_quotient(UniformAbelian(2, 1), 0)


TOWER_CASES = [UniformAbelian(2, 2), UniformAbelian(3, 1), AbelianTimesTorsion(2, 1, torsion_spec(4)),
               AbelianTimesTorsion(3, 1, torsion_spec(3, 3)), JordanMetabelian(3, 2), JordanMetabelian(5, 2),
               FamilyProduct((UniformAbelian(2, 1), AbelianTimesTorsion(3, 1, torsion_spec(3))))]


@pytest.mark.parametrize("fam", TOWER_CASES, ids=repr)
def test_tower_coherence(fam):
    levels = [finite_quotient(fam, k) for k in (1, 2, 3)]
    for lo_i, lo in enumerate(levels):
        for hi in levels[lo_i:]:
            pi = hi.projection_to(lo)
            assert pi.is_homomorphism() and pi.is_surjective()
            ker = hi.group.order // lo.group.order
            assert pi.kernel().order == ker
    # composition of projections is the direct projection
    a = levels[2].projection_to(levels[1])
    b = levels[1].projection_to(levels[0])
    assert (a.compose(b).map == levels[2].projection_to(levels[0]).map).all()


def test_kernels_are_p_groups():
    fam = JordanMetabelian(3, 2)
    lo, hi = finite_quotient(fam, 2), finite_quotient(fam, 4)
    k = hi.projection_to(lo).kernel().order
    while k % 3 == 0:
        k //= 3
    assert k == 1


def test_designated_f_is_powerful():
    for fam in (JordanMetabelian(5, 2), JordanMetabelian(5, 3), UniformAbelian(2, 3)):
        lv = finite_quotient(fam, 2)
        assert is_powerful(lv.group, fam.p, lv.F)


def test_dim_analytic_examples():
    assert dim_analytic(UniformAbelian(7, 4)) == 4
    assert dim_analytic(JordanMetabelian(5, 2)) == 3
    assert dim_analytic(AbelianTimesTorsion(3, 2, torsion_spec(9))) == 2
    assert dim_analytic(FamilyProduct((UniformAbelian(2, 1), JordanMetabelian(5, 2)))) == {2: 1, 5: 3}


def test_dim_estimate_examples():
    assert dim_estimate(UniformAbelian(3, 2)) == 2
    assert dim_estimate(UniformAbelian(2, 3), window=3) == 3
    assert dim_estimate(JordanMetabelian(5, 2)) == 3
    assert dim_estimate(AbelianTimesTorsion(2, 2, torsion_spec(4))) == 2
    with pytest.raises(SpecError):
        dim_estimate(UniformAbelian(2, 1), window=1)


def test_jordan_layers_at_depth_four():
    assert level_layers(JordanMetabelian(5, 2), 4) == [3, 3, 3, 2]


def test_omega1_stable_examples():
    assert omega1_stable(UniformAbelian(3, 2)) == 0
    assert omega1_stable(AbelianTimesTorsion(3, 1, torsion_spec(3))) == 1
    fam = AbelianTimesTorsion(2, 2, torsion_spec(4, 2))
    assert omega1_stable(fam) == 2
    T = abelian([4, 2])
    assert len(omega1(T, 2)) == 4


def test_torsion_rank_examples():
    assert torsion_rank(UniformAbelian(5, 3)) == 0
    assert torsion_rank(AbelianTimesTorsion(2, 1, torsion_spec(4, 2))) == min_generators(abelian([4, 2]))
    assert torsion_rank(JordanMetabelian(5, 2)) == 0


@pytest.mark.parametrize("fam", family_matrix(), ids=repr)
def test_dim_estimate_matches_dim_analytic(fam):
    assert dim_estimate(fam) == dim_analytic(fam)


POWERFUL_FAMILIES = [f for f in family_matrix() if not isinstance(f, JordanMetabelian)]


@pytest.mark.parametrize("fam", POWERFUL_FAMILIES, ids=repr)
def test_omega1_stable_is_torsion_rank(fam):
    assert omega1_stable(fam) == torsion_rank(fam)
    assert dim_analytic(fam) == d_stable(fam) - omega1_stable(fam)


@pytest.mark.parametrize("p,n", [(5, 2), (5, 3)])
def test_jordan_rank_at_depth_two(p, n):
    lv = finite_quotient(JordanMetabelian(p, n), 2)
    assert rank(lv.group) == n + 1


def test_check_family():
    check_family(AbelianTimesTorsion(2, 1, torsion_spec(4, 2)))
    with pytest.raises(SpecError):
        check_family(UniformAbelian(4, 1))
    with pytest.raises(SpecError):
        check_family(AbelianTimesTorsion(3, 1, torsion_spec(2)))
    with pytest.raises(SpecError):
        check_family(FamilyProduct((UniformAbelian(2, 1), UniformAbelian(2, 2))))


@given(st.sampled_from(TOWER_CASES + family_matrix()))
@settings(max_examples=30)
def test_family_json_round_trip(fam):
    assert family_from_json(json.loads(json.dumps(family_to_json(fam)))) == fam


def test_family_file(tmp_path):
    path = tmp_path / "f.family"
    path.write_text(json.dumps({"family": family_to_json(JordanMetabelian(5, 2))}))
    assert load_family_file(path) == JordanMetabelian(5, 2)
    path.write_text(json.dumps({"type": "nope"}))
    with pytest.raises(SpecError):
        load_family_file(path)


LAYER_ROUTE_CASES = [(UniformAbelian(3, 2), 3), (AbelianTimesTorsion(2, 2, torsion_spec(4, 2)), 4),
                     (AbelianTimesTorsion(2, 1, torsion_spec(8)), 5),
                     (JordanMetabelian(3, 2), 3), (JordanMetabelian(5, 2), 2), (JordanMetabelian(5, 3), 2)]


@pytest.mark.parametrize("fam,depth", LAYER_ROUTE_CASES, ids=repr)
def test_structural_layers_match_enumeration(fam, depth):
    enumerated = frattini_layers(finite_quotient(fam, depth))
    assert level_layers(fam, depth, route="structure") == enumerated


def test_structural_layers_with_nonabelian_torsion(named):
    from prorank.verify.corpus import standard_corpus_entries
    M16 = next(e for e in standard_corpus_entries(16, [2]) if e.label == "M16")
    fam = AbelianTimesTorsion(2, 1, M16.group_spec())
    assert level_layers(fam, 3, route="structure") == frattini_layers(finite_quotient(fam, 3))


def test_finite_family_has_dimension_zero():
    assert dim_estimate(AbelianTimesTorsion(3, 0, torsion_spec(9, 3))) == 0
    assert dim_estimate(UniformAbelian(2, 0)) == 0
