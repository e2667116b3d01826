"""Acceptance criteria, each checked exactly (integer equality, no tolerance).

Every suite runs once per session; the determinism criterion runs them all
a second time and compares the structured reports byte for byte.
"""

from __future__ import annotations

import time

import pytest

from prorank.config import DEFAULT_CAPS
from prorank.invariants import is_powerful
from prorank.verify.checks import j_of
from prorank.verify.corpus import standard_corpus
from prorank.verify.report import FAIL, PASS, PRECONDITION, UNDECIDED, render
from prorank.verify.suites import ACCEPTANCE_ORDER, run_suite

MINUTE = 60.0
_RUNS: dict[str, tuple[list, float]] = {}


def suite(name: str):
    """Reports of one suite plus its wall time, computed once per session."""
    if name not in _RUNS:
        t0 = time.perf_counter()
        reports = run_suite(name, DEFAULT_CAPS)
        _RUNS[name] = (reports, time.perf_counter() - t0)
    return _RUNS[name]


def verdicts(reports) -> dict[str, int]:
    out = {PASS: 0, FAIL: 0, UNDECIDED: 0, PRECONDITION: 0}
    for r in reports:
        out[r.verdict] += 1
    return out


def tower_point(r) -> tuple[str, int] | None:
    """(family, depth) of a tower item, whichever route built it."""
    if "family" in r.inputs:
        return str(r.inputs["family"]), int(r.inputs["depth"])
    name, _, depth = str(r.inputs.get("group", "")).partition(" depth ")
    return (name, int(depth)) if depth else None


def not_passing(reports, allowed=(PASS,)):
    return [(r.inputs, r.verdict, r.message, r.witness) for r in reports if r.verdict not in allowed]


@pytest.mark.criterion(1, "rank equals the rank of G/Phi^j(r)(G), nilpotent corpus <= 128 and Jordan depths 2-8")
def test_rank_frattini_quotient():
    assert (j_of(1), j_of(2), j_of(4)) == (4, 7, 12)
    reports, secs = suite("thm-1-3")
    assert not_passing(reports) == []
    points = [tower_point(r) for r in reports]
    assert sorted(d for p in points if p and p[0] == "jordan_metabelian(5,2)" for d in [p[1]]) == list(range(2, 9))
    for r in reports:
        assert r.quantities["j"] == j_of(r.quantities["rank"])
        assert r.quantities["quotient_rank"] == r.quantities["rank"]
    assert secs < 10 * MINUTE


@pytest.mark.criterion(2, "ranks and p-ranks survive G/Phi^(2R+1)(F) for towers with powerful F")
def test_powerful_subgroup_quotient():
    reports, secs = suite("thm-2-1")
    assert not_passing(reports) == []
    assert ("jordan_metabelian(5,2)", 6) in [tower_point(r) for r in reports]
    assert secs < 10 * MINUTE


@pytest.mark.criterion(3, "|Omega_1| = p^d for powerful groups up to 3^5 and 2^7")
def test_omega1_of_powerful_groups():
    reports, secs = suite("hl")
    assert not_passing(reports, (PASS, PRECONDITION)) == []
    powerful = sum(is_powerful(G, G.primes[0]) for G in standard_corpus(3 ** 5, (3,)) + standard_corpus(2 ** 7, (2,))
                   if G.order > 1)
    assert verdicts(reports)[PASS] == powerful
    assert all("not powerful" in r.message for r in reports if r.verdict == PRECONDITION)
    assert secs < 5 * MINUTE


@pytest.mark.criterion(4, "dim = d - log_p|Omega_1| = d - d(T) across the family matrix")
def test_dimension_formula():
    reports, secs = suite("thm-1-4")
    assert not_passing(reports, (PASS, PRECONDITION)) == []
    # the formula presumes a powerful group; Jordan towers are not powerful at any level
    pre = [r for r in reports if r.verdict == PRECONDITION]
    assert all(str(r.inputs["family"]).startswith("jordan_metabelian") for r in pre)
    assert verdicts(reports)[PASS] > 0
    for r in reports:
        if r.verdict == PASS:
            q = r.quantities
            assert q["dim"] == q["d"] - q["omega1_log"] == q["d"] - q["torsion_rank"]
    assert secs < 10 * MINUTE


@pytest.mark.criterion(5, "rank-axiom decider agrees with brute-force rank profiles for all r, rvec <= 3")
def test_rank_axiom_equivalence():
    reports, secs = suite("rank-axiom")
    assert not_passing(reports) == []
    assert {tuple(r.inputs["pi"]) for r in reports} == {(2,), (3,), (2, 3)}
    assert secs < 15 * MINUTE


@pytest.mark.criterion(6, "quotient certificate is true exactly for normal definable sets with quotient B")
def test_quotient_certificate():
    reports, _ = suite("quotient-iso")
    assert len(reports) == 30
    assert not_passing(reports) == []
    values = {r.quantities["sentence_true"] for r in reports}
    assert values == {True, False}
    assert all(r.inputs["order"] <= 24 for r in reports)


@pytest.mark.criterion(7, "fast and naive evaluators agree on generated sentences, |G| <= 16")
def test_evaluator_equivalence():
    reports, _ = suite("evaluators")
    assert not_passing(reports) == []
    assert {r.inputs["order"] for r in reports} == set(range(1, 17)) - {5, 7, 10, 11, 13, 14, 15}


@pytest.mark.criterion(8, "Jordan metabelian group, p = 5: d = 2, rank n+1, K needs n+1 generators mod Phi(F)")
def test_jordan_example():
    reports, _ = suite("example-2-3")
    assert len(reports) == 2
    assert not_passing(reports) == []
    for r, n in zip(reports, (2, 3)):
        q = r.quantities
        assert q["d"] == 2
        assert q["rank_level"] == q["rank_frattini_quotient"] == n + 1
        assert q["K_generators_mod_PhiF"] == n + 1


@pytest.mark.criterion(9, "rank <= mlr+1 with equality exactly when a runaway couple is found")
def test_runaway_couple_consistency():
    reports, _ = suite("lucchini")
    assert not_passing(reports) == []
    assert any(r.quantities["rank"] == r.quantities["mlr"] + 1 for r in reports)


@pytest.mark.criterion(10, "two consecutive runs of suites 1-9 give byte-identical structured reports")
def test_determinism():
    first = "".join(render(suite(name)[0], "structured") for name in ACCEPTANCE_ORDER)
    second = "".join(render(run_suite(name, DEFAULT_CAPS), "structured") for name in ACCEPTANCE_ORDER)
    assert first == second
