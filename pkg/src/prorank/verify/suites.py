"""Named batches of checks, as run by the CLI and the acceptance tests.

A suite is a deterministic list of items; each item is a zero-argument
callable returning a :class:`VerifyReport`. Running with several jobs forks
worker processes over item indices and keeps the input order.
"""

from __future__ import annotations

import itertools
import multiprocessing
from dataclasses import dataclass
from typing import Callable

from ..config import DEFAULT_CAPS, Caps
from ..group import FiniteGroup, Subgroup, factorize, is_nilpotent, is_normal, quotient
from ..invariants import (frattini, is_powerful, min_generators, rank, rank_profile)
from ..isomorphism import is_isomorphic
from ..spec import abelian, cyclic, permutation_group, semidirect
from ..towers import (AbelianTimesTorsion, family_primes, FamilyProduct, JordanMetabelian, ProPFamily,
                      UniformAbelian, describe_family, dim_analytic, finite_quotient,
                      jordan_matrix, level_order, rank_upper_bound, torsion_spec)
from .checks import (decide_dim_axiom, rank_axiom_trace, verify_cor_2_2,
                     verify_hl, verify_thm_1_3, verify_thm_1_3_lattice, verify_thm_1_4,
                     verify_thm_2_1, verify_thm_2_1_lattice)
from .corpus import metacyclic, standard_corpus
from .lucchini import verify_lucchini
from .report import FAIL, VerifyReport, run_check

Item = Callable[[], VerifyReport]


@dataclass(frozen=True)
class Suite:
    name: str
    summary: str
    build: Callable[[Caps], list[Item]]


# ---------------------------------------------------------------------------
# rank suites


def tower_item(name: str, fam: ProPFamily, depth: int, caps: Caps, fn) -> Item:
    """Check ``fn(level)`` on a tower level; building the level may itself be undecided."""

    def item() -> VerifyReport:
        label = f"{describe_family(fam)} depth {depth}"

        def body(rep: VerifyReport):
            lv = finite_quotient(fam, depth, caps)
            inner = fn(lv)
            rep.inputs.update({k: v for k, v in inner.inputs.items() if k != "group"})
            rep.quantities.update(inner.quantities)
            rep.verdict, rep.witness, rep.message = inner.verdict, inner.witness, inner.message

        return run_check(name, {"group": label}, body)

    return item


def beyond_enumeration(fam: ProPFamily, depth: int, caps: Caps) -> bool:
    """Jordan levels above the tower cap go through their lattice model instead."""
    return isinstance(fam, JordanMetabelian) and level_order(fam, depth, caps) > caps.tower_order


def thm_1_3_items(caps: Caps) -> list[Item]:
    items: list[Item] = [lambda G=G: verify_thm_1_3(G, caps)
                         for G in standard_corpus(128, (2, 3), caps) if is_nilpotent(G)]
    fam = JordanMetabelian(5, 2)
    for depth in range(2, 9):
        if beyond_enumeration(fam, depth, caps):
            items.append(lambda depth=depth: verify_thm_1_3_lattice(fam, depth, caps))
        else:
            items.append(tower_item("thm-1-3", fam, depth, caps,
                                     lambda lv: verify_thm_1_3(lv.group, caps)))
    return items


TOWERS_2_1 = (
    (UniformAbelian(2, 1), 10), (UniformAbelian(2, 2), 6), (UniformAbelian(2, 3), 4),
    (UniformAbelian(3, 2), 4), (UniformAbelian(5, 1), 4),
    (JordanMetabelian(5, 2), 6), (JordanMetabelian(5, 2), 2), (JordanMetabelian(5, 2), 3),
    (JordanMetabelian(3, 2), 4),
    (AbelianTimesTorsion(2, 1, torsion_spec(4)), 6), (AbelianTimesTorsion(2, 2, torsion_spec(2)), 5),
    (AbelianTimesTorsion(3, 1, torsion_spec(3)), 5), (AbelianTimesTorsion(3, 2, torsion_spec(9)), 3),
    (FamilyProduct((UniformAbelian(2, 2), AbelianTimesTorsion(3, 1, torsion_spec(3)))), 4),
)


def thm_2_1_items(caps: Caps) -> list[Item]:
    items = []
    for fam, depth in TOWERS_2_1:
        R = rank_upper_bound(fam, caps)
        pi = sorted(set(family_primes(fam)))
        if beyond_enumeration(fam, depth, caps):
            items.append(lambda fam=fam, depth=depth, R=R: verify_thm_2_1_lattice(fam, depth, R, caps))
            continue
        items.append(tower_item("thm-2-1", fam, depth, caps,
                                 lambda lv, R=R, pi=pi: verify_thm_2_1(lv.group, lv.F, R, pi, caps)))
    return items


def cor_2_2_items(caps: Caps) -> list[Item]:
    return [lambda G=G: verify_cor_2_2(G, None, None, sorted(factorize(G.order)), caps)
            for G in standard_corpus(128, (2, 3), caps) if is_nilpotent(G)]


# ---------------------------------------------------------------------------
# Omega_1 and dimension


def hl_items(caps: Caps) -> list[Item]:
    groups = standard_corpus(3 ** 5, (3,), caps) + standard_corpus(2 ** 7, (2,), caps)
    return [lambda G=G: verify_hl(G, None, caps) for G in groups if G.order > 1]


def family_matrix(caps: Caps = DEFAULT_CAPS) -> list[ProPFamily]:
    """p in {2,3,5}; d <= 3; powerful torsion parts of order <= 16; Jordan blocks n <= 3."""
    out: list[ProPFamily] = []
    for p in (2, 3, 5):
        for d in range(0, 4):
            out.append(UniformAbelian(p, d))
        for T in _powerful_torsion(p, 16, caps):
            for d in range(0, 4):
                out.append(AbelianTimesTorsion(p, d, T))
        for n in range(2, 4):
            if p > n:
                out.append(JordanMetabelian(p, n))
    return out


def _powerful_torsion(p: int, bound: int, caps: Caps):
    from .corpus import standard_corpus_entries
    specs = []
    for e in standard_corpus_entries(bound, (p,), caps):
        if e.group.order == 1 or not is_powerful(e.group, p):
            continue
        specs.append(e.group_spec())
    return specs


def thm_1_4_items(caps: Caps) -> list[Item]:
    return [lambda fam=fam: verify_thm_1_4(fam, caps) for fam in family_matrix(caps)]


DIM_AXIOM_FAMILIES = (UniformAbelian(2, 2), UniformAbelian(3, 1), AbelianTimesTorsion(3, 1, torsion_spec(3)),
            AbelianTimesTorsion(2, 1, torsion_spec(4)), JordanMetabelian(3, 2),
            FamilyProduct((UniformAbelian(2, 1), AbelianTimesTorsion(3, 1, torsion_spec(3)))))


def dim_axiom_items(caps: Caps, families=DIM_AXIOM_FAMILIES) -> list[Item]:
    """decide_dim_axiom against dim_analytic for every dvec in {0..3}^primes."""
    items = []
    for fam in families:
        def item(fam=fam) -> VerifyReport:
            def body(rep: VerifyReport):
                primes = sorted(set(family_primes(fam)))
                r = level_rank(fam, caps)
                analytic = dim_analytic(fam)
                if not isinstance(analytic, dict):
                    analytic = {primes[0]: analytic}
                agree = 0
                for values in itertools.product(range(4), repeat=len(primes)):
                    dvec = dict(zip(primes, values))
                    got = decide_dim_axiom(fam, primes, r, dvec, caps)
                    want = all(analytic[p] == dvec[p] for p in primes)
                    if got != want:
                        rep.verdict = FAIL
                        rep.witness = {"dvec": dvec, "decided": got, "analytic": analytic}
                        return
                    agree += 1
                rep.quantities.update(rank=r, dim=analytic, cases=agree)
            return run_check("dim-axiom", {"family": describe_family(fam)}, body)
        items.append(item)
    return items


def level_rank(fam: ProPFamily, caps: Caps) -> int:
    lv = finite_quotient(fam, 2, caps)
    return rank(lv.group, caps=caps)


# ---------------------------------------------------------------------------
# first-order certificates


def rank_axiom_items(caps: Caps, max_order: int = 64, r_max: int = 3) -> list[Item]:
    items = []
    for pi in ((2,), (3,), (2, 3)):
        for G in standard_corpus(max_order, pi, caps):
            if not is_nilpotent(G):
                continue
            items.append(lambda G=G, pi=pi: rank_axiom_sweep(G, pi, r_max, caps))
    return items


def rank_axiom_sweep(G: FiniteGroup, pi, r_max: int, caps: Caps) -> VerifyReport:
    """decide_rank_axiom against the brute-force profile for every (r, rvec)."""

    def body(rep: VerifyReport):
        prof = rank_profile(G, pi, caps)
        truth = (prof.rank, tuple(prof.p_ranks.get(p, 0) for p in pi))
        n_true = n_all = 0
        for r in range(0, r_max + 1):
            trace = rank_axiom_trace(G, pi, r, caps)
            for values in itertools.product(range(r_max + 1), repeat=len(pi)):
                rvec = dict(zip(pi, values))
                got = trace.decide(rvec, pi)
                want = truth == (r, values)
                n_all += 1
                n_true += got
                if got != want:
                    rep.verdict = FAIL
                    rep.witness = {"r": r, "rvec": rvec, "decided": got, "profile": prof.as_dict()}
                    return
        rep.quantities.update(profile=prof.as_dict(), cases=n_all, accepted=n_true)

    return run_check("rank-axiom", {"group": G.label, "order": G.order, "pi": list(pi)}, body)


def quotient_iso_cases(caps: Caps = DEFAULT_CAPS):
    """Fixed (G, phi, B) matrix with |G| <= 24."""
    C = lambda n: cyclic(n, caps)
    S3 = metacyclic(3, 2, 2, 0, "S3")
    D4 = metacyclic(4, 2, 3, 0, "D4")
    Q8 = metacyclic(4, 2, 3, 2, "Q8")
    V4 = abelian([2, 2], caps, label="C2xC2")
    A4 = semidirect(3, [2, 2], [[0, 1], [1, 1]], caps, label="A4")
    S4 = permutation_group(4, ["(0 1)", "(0 1 2 3)"], caps, label="S4")
    E8 = abelian([2, 2, 2], caps, label="C2xC2xC2")
    sq, cube, triv, whole = "E y . x = y*y", "E y . x = y^3", "x = 1", "x = x"
    inv, cent, comm = "x*x = 1", "A y . x*y = y*x", "E y . E z . x = [y, z]"
    return [
        (C(4), sq, C(2)), (C(3), sq, C(2)), (S3, whole, C(1)), (C(4), whole, C(1)),
        (Q8, sq, V4), (Q8, sq, C(4)), (D4, sq, V4), (V4, triv, V4), (V4, triv, C(4)),
        (C(4), triv, C(4)), (S3, cube, C(2)), (S3, sq, C(2)), (S3, comm, C(2)), (S3, comm, C(3)),
        (C(6), sq, C(2)), (C(6), cube, C(3)), (C(6), cube, C(2)), (A4, comm, C(3)),
        (A4, sq, C(3)), (Q8, cent, V4), (D4, cent, C(4)), (S3, cent, S3), (E8, inv, C(1)),
        (C(4), inv, C(2)), (S3, inv, C(3)), (S4, comm, C(2)), (S4, sq, C(2)), (C(12), sq, C(2)),
        (C(12), cube, C(4)), (V4, sq, V4),
    ]


def quotient_iso_items(caps: Caps) -> list[Item]:
    return [lambda case=case: quotient_iso_report(*case, caps) for case in quotient_iso_cases(caps)]


def quotient_iso_report(G: FiniteGroup, phi_text: str, B: FiniteGroup, caps: Caps) -> VerifyReport:
    from ..fol.naive import eval_naive
    from ..fol.parser import parse_formula
    from ..fol.prefix import prefix_class
    from ..fol.schemas import build_quotient_iso_sentence, phi_variable

    def body(rep: VerifyReport):
        phi = parse_formula(phi_text)
        sentence = build_quotient_iso_sentence(B, phi)
        got = eval_naive(G, sentence, caps=caps)
        want = _quotient_oracle(G, phi, phi_variable(phi), B, caps)
        rep.quantities.update(prefix=prefix_class(sentence).ascii, sentence_true=got, oracle=want)
        if got != want:
            rep.verdict = FAIL
            rep.witness = {"violated": "sentence value = normal subgroup with quotient B"}

    inputs = {"group": G.label, "order": G.order, "phi": phi_text, "B": B.label}
    return run_check("quotient-iso", inputs, body)


def _quotient_oracle(G, phi, var, B, caps) -> bool:
    """Direct computation: the defined set is a normal subgroup with G/N isomorphic to B."""
    from ..fol.naive import NaiveEvaluator
    ev = NaiveEvaluator(G, caps)
    S = [g for g in range(G.order) if ev.evaluate(phi, {var: g})]
    if 0 not in S:
        return False
    Sset = set(S)
    for a in S:
        for b in S:
            if int(G.mul(a, b)) not in Sset:
                return False
    N = Subgroup(G, S, _trusted=True)
    if not is_normal(G, N):
        return False
    Q, _ = quotient(G, N, check=False)
    return Q.order == B.order and is_isomorphic(Q, B, caps)


def generated_sentences(G: FiniteGroup, caps: Caps = DEFAULT_CAPS):
    """gamma for q <= 3, beta1 over the primes of |G| for r <= 2, four quotient certificates."""
    from ..fol.parser import parse_formula
    from ..fol.schemas import build_beta1, build_gamma, build_quotient_iso_sentence
    pi = sorted(factorize(G.order)) or [2]
    out = []
    for q in (1, 2, 3):
        out.append((f"gamma(q={q})", build_gamma(q)))
    for r in (1, 2):
        out.append((f"beta1(pi={pi},r={r})", build_beta1(pi, r)))
    for phi, n in (("x = x", 1), ("E y . x = y*y", 2), ("E y . E z . x = [y, z]", 2), ("x*x = 1", 2)):
        out.append((f"quotient-iso(C{n},{phi})", build_quotient_iso_sentence(cyclic(n, caps), parse_formula(phi))))
    return out


EVALUATOR_STEPS = 10 ** 10


def evaluator_items(caps: Caps) -> list[Item]:
    # beta1 with r = 2 on order-16 groups of large d runs to a few 10^9 naive steps
    caps = caps.with_(steps=max(caps.steps, EVALUATOR_STEPS))
    return [lambda G=G: evaluator_report(G, caps)
            for G in standard_corpus(16, (2, 3), caps)]


def evaluator_report(G: FiniteGroup, caps: Caps) -> VerifyReport:
    from ..fol.fast import eval_fast
    from ..fol.naive import eval_naive

    def body(rep: VerifyReport):
        names = []
        for name, s in generated_sentences(G, caps):
            fast = eval_fast(G, s, caps)
            naive = eval_naive(G, s, caps=caps)
            names.append(f"{name}={int(naive)}")
            if fast != naive:
                rep.verdict = FAIL
                rep.witness = {"sentence": name, "fast": fast, "naive": naive}
                return
        rep.quantities["sentences"] = names

    return run_check("evaluators", {"group": G.label, "order": G.order}, body)


# ---------------------------------------------------------------------------
# metabelian example and Lucchini


def example_2_3_items(caps: Caps) -> list[Item]:
    return [lambda n=n: example_2_3_report(5, n, caps) for n in (2, 3)]


def jordan_frattini_quotient(p: int, n: int, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """``C_{p^2} ⋉ C_p^n`` with the Jordan action: the expected ``G/Φ(F)``."""
    return semidirect(p * p, [p] * n, jordan_matrix(n), caps, cap=caps.tower_order,
                      label=f"C{p * p}:(C{p})^{n}")


def example_2_3_report(p: int, n: int, caps: Caps) -> VerifyReport:
    """d(G) = 2, rank n+1, K needs n+1 generators modulo Φ(F), rank(G) = rank(G/Φ(F))."""
    fam = JordanMetabelian(p, n)
    big = caps.with_(subgroups=max(caps.subgroups, 20000), order=max(caps.order, 20000))

    def body(rep: VerifyReport):
        lv = finite_quotient(fam, 2, caps)
        G = lv.group
        d = min_generators(G, caps=caps)
        PhiF = frattini(G, lv.F, caps)
        Q, proj = quotient(G, PhiF, check=False)
        model = jordan_frattini_quotient(p, n, caps)
        same = Q.order == model.order and is_isomorphic(Q, model, big)
        rq_scan = rank(model, caps=big)
        rq_cert = rank(model, caps=caps)  # over the scan cap: matching-bounds certificate
        rg = rank(G, caps=caps)
        # K = <c^p> A is the designated subgroup F of the level
        dK = min_generators(G, lv.F, caps)
        rep.quantities.update(d=d, rank_level=rg, rank_frattini_quotient=rq_scan,
                              rank_certificate=rq_cert, frattini_quotient_order=Q.order,
                              frattini_quotient_matches=same, K_generators_mod_PhiF=dK)
        bad = []
        if d != 2:
            bad.append("d(G) = 2")
        if rg != n + 1 or rq_scan != n + 1 or rq_cert != n + 1:
            bad.append("rank = n+1")
        if dK != n + 1:
            bad.append("d(K Phi(F)/Phi(F)) = n+1")
        if rg != rq_scan:
            bad.append("rank(G) = rank(G/Phi(F))")
        if not same:
            bad.append("G/Phi(F) = C_{p^2} x| C_p^n")
        if bad:
            rep.verdict = FAIL
            rep.witness = {"violated": bad}

    return run_check("example-2-3", {"family": describe_family(fam), "depth": 2}, body)


def lucchini_items(caps: Caps) -> list[Item]:
    groups = standard_corpus(128, (2, 3), caps)
    seen = {G.label for G in groups}
    # primes 5 and 7 add runaway couples with q = 2, 3 and p = 5, 7
    for G in standard_corpus(100, (2, 3, 5, 7), caps):
        if G.label not in seen and any(p > 3 for p in factorize(G.order)):
            groups.append(G)
    return [lambda G=G: verify_lucchini(G, caps) for G in groups]


SUITES: dict[str, Suite] = {s.name: s for s in (
    Suite("thm-1-3", "rank(G) = rank(G/Phi^j(r)(G)) for nilpotent G", thm_1_3_items),
    Suite("thm-2-1", "ranks survive G/Phi^(2R+1)(F) with powerful F", thm_2_1_items),
    Suite("cor-2-2", "ranks survive G/Phi^(2R+ceil(log2 R)+2)(F), F nilpotent", cor_2_2_items),
    Suite("hl", "|Omega_1| = p^d for powerful p-groups", hl_items),
    Suite("thm-1-4", "dim = d - log_p|Omega_1| = d - d(T) on the family matrix", thm_1_4_items),
    Suite("rank-axiom", "rank-axiom decider against brute-force rank profiles", rank_axiom_items),
    Suite("quotient-iso", "quotient certificate against normality + isomorphism", quotient_iso_items),
    Suite("evaluators", "eval_fast = eval_naive on generated schema sentences", evaluator_items),
    Suite("example-2-3", "Jordan-block metabelian claims for p = 5", example_2_3_items),
    Suite("lucchini", "rank <= mlr+1, equality iff a runaway couple exists", lucchini_items),
    Suite("dim-axiom", "dimension decider against closed forms", dim_axiom_items),
)}

ACCEPTANCE_ORDER = ("thm-1-3", "thm-2-1", "hl", "thm-1-4", "rank-axiom", "quotient-iso",
                    "evaluators", "example-2-3", "lucchini")

_ITEMS: list[Item] = []


def _call(i: int) -> VerifyReport:
    return _ITEMS[i]()


def run_items(items: list[Item], jobs: int = 1) -> list[VerifyReport]:
    if jobs <= 1 or len(items) <= 1:
        return [f() for f in items]
    global _ITEMS
    _ITEMS = items
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(jobs) as pool:
        return pool.map(_call, range(len(items)), chunksize=1)


def run_suite(name: str, caps: Caps = DEFAULT_CAPS, jobs: int = 1) -> list[VerifyReport]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return run_items(SUITES[name].build(caps), jobs)
