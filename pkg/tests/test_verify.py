from __future__ import annotations

import json

import pytest
from hypothesis import given

from prorank.config import Caps
from prorank.errors import SpecError, Undecided
from prorank.group import center
from prorank.invariants import max_local_rank, rank, rank_profile
from prorank.isomorphism import is_isomorphic
from prorank.spec import abelian, cyclic, semidirect
from prorank.towers import AbelianTimesTorsion, FamilyProduct, JordanMetabelian, UniformAbelian, \
    finite_quotient, torsion_spec
from prorank.verify.checks import cor_index, decide_dim_axiom, decide_rank_axiom, j_of, m_of, \
    rank_axiom_trace, verify_cor_2_2, verify_hl, verify_thm_1_3, verify_thm_1_3_lattice, \
    verify_thm_1_4, verify_thm_2_1, verify_thm_2_1_lattice
from prorank.verify.corpus import standard_corpus, standard_corpus_entries
from prorank.verify.lucchini import find_runaway_couple, verify_lucchini
from prorank.verify.report import FAIL, PASS, PRECONDITION, UNDECIDED, VerifyReport, exit_code, \
    render, run_check
from strategies import corpus_groups, small_corpus


def test_index_formulas():
    assert [j_of(r) for r in (1, 2, 3, 4, 8)] == [4, 7, 10, 12, 21]
    assert [cor_index(R) for R in (1, 2, 4)] == [4, 7, 12]
    assert [m_of(r) for r in (1, 2, 3, 4, 5)] == [1, 2, 3, 3, 4]


# ---------------------------------------------------------------------------
# rank stabilization


def test_frattini_quotient_rank_cyclic():
    rep = verify_thm_1_3(cyclic(1024))
    q = rep.quantities
    assert rep.verdict == PASS
    assert (q["rank"], q["j"], q["kernel_order"], q["quotient_order"], q["proper"]) == (1, 4, 64, 16, True)


def test_frattini_quotient_rank_needs_nilpotent(named):
    assert verify_thm_1_3(named.S3()).verdict == PRECONDITION


def test_frattini_quotient_rank_jordan_depth_eight():
    rep = verify_thm_1_3_lattice(JordanMetabelian(5, 2), 8)
    assert rep.verdict == PASS
    # the series of G has length 9 < j(3) = 10, so the quotient is the group itself
    assert rep.quantities["rank"] == 3 and rep.quantities["proper"] is False


def test_frattini_quotient_lattice_agrees_with_enumeration():
    for depth in (2, 3):
        lv = finite_quotient(JordanMetabelian(5, 2), depth)
        a = verify_thm_1_3(lv.group).quantities
        b = verify_thm_1_3_lattice(JordanMetabelian(5, 2), depth).quantities
        for key in ("rank", "j", "kernel_order", "quotient_order", "quotient_rank", "proper"):
            assert a[key] == b[key]


def test_powerful_quotient_rank_homocyclic():
    rep = verify_thm_2_1(cyclic(1024), R=1)
    assert rep.verdict == PASS
    assert rep.quantities["index"] == 3 and rep.quantities["quotient_order"] == 8
    G = abelian([27, 27])
    rep = verify_thm_2_1(G, R=2)
    assert rep.verdict == PASS and rep.quantities["quotient_rank"] == 2


def test_powerful_quotient_rank_jordan_depth_six():
    rep = verify_thm_2_1_lattice(JordanMetabelian(5, 2), 6, R=3)
    assert rep.verdict == PASS and rep.quantities["rank"] == 3


def test_powerful_quotient_lattice_agrees_with_enumeration():
    fam = JordanMetabelian(5, 2)
    lv = finite_quotient(fam, 2)
    a = verify_thm_2_1(lv.group, lv.F, R=3, pi=[5])
    b = verify_thm_2_1_lattice(fam, 2, R=3)
    assert a.verdict == b.verdict == PASS
    for key in ("index", "kernel_order", "quotient_order", "quotient_rank"):
        assert a.quantities[key] == b.quantities[key]


def test_powerful_quotient_rank_above_bound_is_precondition():
    rep = verify_thm_2_1(abelian([2, 2, 2]), R=2)
    assert rep.verdict == PRECONDITION and "exceeds" in rep.message


def test_powerful_quotient_needs_powerful_f(named):
    assert verify_thm_2_1(named.Q8(), R=2).verdict == PRECONDITION


def test_nilpotent_quotient_rank():
    rep = verify_cor_2_2(abelian([16, 4]), R=2)
    assert rep.verdict == PASS and rep.quantities["index"] == 7
    assert rep.quantities["powerful_index"] == 2


@pytest.mark.parametrize("G", [G for G in small_corpus(64, (2, 3)) if G.is_nilpotent], ids=lambda G: G.label)
def test_rank_theorems_on_small_corpus(G):
    assert verify_thm_1_3(G).verdict == PASS
    assert verify_cor_2_2(G).verdict == PASS
    assert verify_thm_2_1(G).verdict in (PASS, PRECONDITION)


# ---------------------------------------------------------------------------
# Omega_1 and dimension


def test_omega1_order_examples(named):
    rep = verify_hl(abelian([9, 3]))
    assert rep.verdict == PASS and rep.quantities["omega1"] == 9
    rep = verify_hl(named.M16())
    assert rep.verdict == PASS and rep.quantities == {"d": 2, "omega1": 4}
    assert verify_hl(named.Q8()).verdict == PRECONDITION
    assert verify_hl(cyclic(6)).verdict == PRECONDITION


def test_dimension_formula_examples():
    rep = verify_thm_1_4(UniformAbelian(3, 2))
    assert rep.verdict == PASS and (rep.quantities["dim"], rep.quantities["d"], rep.quantities["omega1_log"]) == (2, 2, 0)
    rep = verify_thm_1_4(AbelianTimesTorsion(2, 1, torsion_spec(4)))
    assert rep.verdict == PASS and (rep.quantities["d"], rep.quantities["torsion_rank"]) == (2, 1)
    rep = verify_thm_1_4(AbelianTimesTorsion(3, 2, torsion_spec(3, 3)))
    assert rep.verdict == PASS and (rep.quantities["d"], rep.quantities["omega1_log"]) == (4, 2)


def test_dimension_formula_jordan_is_precondition():
    rep = verify_thm_1_4(JordanMetabelian(5, 2))
    assert rep.verdict == PRECONDITION


# ---------------------------------------------------------------------------
# axiom deciders


def test_rank_axiom_examples():
    G = abelian([2, 2, 3])
    assert decide_rank_axiom(G, [2, 3], 2, {2: 2, 3: 1})
    assert not decide_rank_axiom(G, [2, 3], 2, {2: 1, 3: 1})
    assert not decide_rank_axiom(G, [2, 3], 3, {2: 2, 3: 1})
    assert decide_rank_axiom(cyclic(1), [2], 0, {})


def test_rank_axiom_rejects_primes_outside_pi(named):
    with pytest.raises(SpecError):
        decide_rank_axiom(cyclic(6), [2], 1, {2: 1})
    with pytest.raises(SpecError):
        decide_rank_axiom(named.S3(), [2, 3], 2, {2: 1, 3: 1})


@given(corpus_groups(32))
def test_rank_axiom_matches_profile(G):
    if not G.is_nilpotent:
        return
    pi = G.primes or [2]
    prof = rank_profile(G, pi)
    for r in range(0, 4):
        tr = rank_axiom_trace(G, pi, r)
        assert tr.decide(prof.p_ranks, pi) == (prof.rank == r)
        wrong = {p: v + 1 for p, v in prof.p_ranks.items()}
        assert not tr.decide(wrong, pi)


@pytest.mark.parametrize("G", [G for G in small_corpus(16, (2, 3)) if G.is_nilpotent], ids=lambda G: G.label)
def test_materialized_theta_agrees(G):
    pi = G.primes or [2]
    prof = rank_profile(G, pi)
    candidates = [H for H in small_corpus(16, (2, 3)) if set(H.primes) <= set(pi)]
    for r in (1, 2, 3):
        for rvec in (prof.p_ranks, {p: 1 for p in pi}):
            try:
                got = decide_rank_axiom(G, pi, r, rvec, theta_candidates=candidates)
            except Exception as exc:  # nontrivial kernels are outside the materialized mode
                assert "trivial kernel" in str(exc)
                continue
            assert got == decide_rank_axiom(G, pi, r, rvec)


def test_dim_axiom_examples():
    assert decide_dim_axiom(UniformAbelian(2, 2), [2], 2, {2: 2})
    fam = AbelianTimesTorsion(3, 1, torsion_spec(3))
    assert decide_dim_axiom(fam, [3], 2, {3: 1})
    assert not decide_dim_axiom(fam, [3], 2, {3: 2})
    with pytest.raises(SpecError):
        decide_dim_axiom(fam, [3], 3, {3: 1})


def test_dim_axiom_product_family():
    fam = FamilyProduct((UniformAbelian(2, 1), AbelianTimesTorsion(3, 1, torsion_spec(3))))
    assert decide_dim_axiom(fam, [2, 3], 2, {2: 1, 3: 1})
    assert not decide_dim_axiom(fam, [2, 3], 2, {2: 1, 3: 2})


# ---------------------------------------------------------------------------
# runaway couples


def test_runaway_couple_examples(named):
    S3 = named.S3()
    c = find_runaway_couple(S3, 3)
    assert c is not None and (c.H.order, c.N.order, c.q, c.rank_witness) == (6, 3, 2, 1)
    G = named.NEG18()
    c = find_runaway_couple(G, 3)
    assert c is not None and c.rank_witness == 2 and rank(G) == 3
    assert find_runaway_couple(cyclic(15), 5) is None
    with pytest.raises(SpecError):
        find_runaway_couple(S3, 2)


def test_runaway_couple_is_a_power_action(named):
    G = named.NEG18()
    c = find_runaway_couple(G, 3)
    assert c.scalar == 2 and c.N <= c.H
    assert c.H.order == c.N.order * c.q


@given(corpus_groups(60, (2, 3, 5)))
def test_rank_at_most_mlr_plus_one(G):
    rep = verify_lucchini(G)
    assert rep.verdict == PASS
    assert rep.quantities["rank"] <= max_local_rank(G) + 1


# ---------------------------------------------------------------------------
# corpus


def test_corpus_order_eight():
    C = standard_corpus(8, [2])
    eight = [G for G in C if G.order == 8]
    assert len(eight) == 5
    assert not any(is_isomorphic(a, b) for i, a in enumerate(eight) for b in eight[i + 1:])
    labels = {G.label for G in eight}
    assert {"C8", "C4xC2", "C2xC2xC2", "D4", "Q8"} == labels


def test_corpus_trivial():
    C = standard_corpus(1, [2, 3])
    assert len(C) == 1 and C[0].order == 1


def test_corpus_extraspecial_27():
    C = standard_corpus(27, [3])
    nonab = [G for G in C if G.order == 27 and not G.is_abelian]
    assert len(nonab) == 2 and not is_isomorphic(*nonab)
    assert all(center(G).order == 3 for G in nonab)
    exps = sorted(G.exponent for G in nonab)
    assert exps == [3, 9]


def test_corpus_is_deterministic_and_labelled():
    a = [(e.label, e.provenance, e.group.order) for e in standard_corpus_entries(48, [2, 3])]
    b = [(e.label, e.provenance, e.group.order) for e in standard_corpus_entries(48, [2, 3])]
    assert a == b and all(lab and prov for lab, prov, _ in a)


def test_corpus_validation():
    with pytest.raises(ValueError):
        standard_corpus(0, [2])
    with pytest.raises(ValueError):
        standard_corpus(8, [4])


# ---------------------------------------------------------------------------
# reports


def test_report_verdicts_and_exit_codes():
    ok = VerifyReport("x", {"group": "G"})
    bad = VerifyReport("x", {"group": "G"}, verdict=FAIL, witness={"violated": "a = b"})
    und = VerifyReport("x", {"group": "G"}, verdict=UNDECIDED, witness={"cap": "steps", "limit": 1})
    pre = VerifyReport("x", {"group": "G"}, verdict=PRECONDITION)
    assert exit_code([ok, pre]) == 0
    assert exit_code([ok, und]) == 2
    assert exit_code([ok, und, bad]) == 1
    with pytest.raises(ValueError):
        VerifyReport("x", {}, verdict="maybe")


def test_run_check_maps_caps_to_undecided():
    def body(rep):
        raise Undecided("subgroups", 512, "too big")
    rep = run_check("demo", {"group": "G"}, body)
    assert rep.verdict == UNDECIDED and rep.witness == {"cap": "subgroups", "limit": 512}


def test_structured_records_omit_time_unless_asked():
    rep = verify_hl(abelian([4, 2]))
    rec = json.loads(rep.to_json())
    assert "millis" not in rec and rec["verdict"] == "pass"
    assert "millis" in json.loads(rep.to_json(timing=True))
    assert render([rep], "structured") == render([rep], "structured")
    text = render([rep])
    assert text.splitlines()[-1].startswith("summary: pass=1")


def test_fail_reports_name_what_was_violated():
    from prorank.cli import rank_axiom_report
    rep = rank_axiom_report(abelian([2, 2, 2]), [2], 2, None, Caps())
    assert rep.verdict == FAIL and rep.witness
