"""Theorem checks and the semantic rank / dimension axiom deciders."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..config import DEFAULT_CAPS, Caps
from ..errors import SpecError, Undecided, UnsupportedSchema
from ..group import FiniteGroup, Subgroup, factorize, is_nilpotent, is_normal, quotient
from ..invariants import (frattini_series, is_powerful, is_semi_powerful, min_generators,
                          omega1, p_rank, rank, rank_profile, sylow)
from ..lattice import JordanLevelModel
from ..towers import (FamilyProduct, JordanMetabelian, ProPFamily, describe_family, dim_analytic, family_primes,
                      finite_quotient, omega1_stable, torsion_rank)
from .report import FAIL, PRECONDITION, VerifyReport, run_check


def ceil_log2(r: int) -> int:
    """``ceil(log2 r)`` for r >= 1; 0 for r <= 1."""
    return (r - 1).bit_length() if r > 1 else 0


def j_of(r: int) -> int:
    return 2 * r + ceil_log2(r) + 2


def m_of(r: int) -> int:
    # r = 0 only occurs for the trivial group; one layer suffices there
    return ceil_log2(r) + 1


def cor_index(R: int) -> int:
    return 2 * R + ceil_log2(R) + 2


def _label(G: FiniteGroup) -> str:
    return G.label or f"order-{G.order}"


def _sylows_powerful(G: FiniteGroup, F: Subgroup, caps: Caps) -> dict[int, bool]:
    return {p: is_powerful(G, p, sylow(G, p, F, caps)) for p in sorted(factorize(F.order))}


def _precondition(rep: VerifyReport, message: str) -> None:
    rep.verdict = PRECONDITION
    rep.message = message


# ---------------------------------------------------------------------------
# rank in a Frattini quotient


def verify_thm_1_3(G: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> VerifyReport:
    """Nilpotent G of rank r has the same rank as ``G / Φ^{j(r)}(G)``."""

    def body(rep: VerifyReport):
        if not is_nilpotent(G):
            return _precondition(rep, "group is not nilpotent")
        r = rank(G, caps=caps)
        j = j_of(r)
        N = frattini_series(G, j, caps=caps).terms[j]
        Q, _ = quotient(G, N, check=False)
        rq = rank(Q, caps=caps)
        rep.quantities.update(rank=r, j=j, kernel_order=N.order, quotient_order=Q.order,
                              quotient_rank=rq, proper=N.order > 1)
        if rq != r:
            rep.verdict = FAIL
            rep.witness = {"violated": "rank(G) = rank(G/Phi^j(G))", "rank": r, "quotient_rank": rq}

    return run_check("thm-1-3", {"group": _label(G), "order": G.order}, body)


def _rank_equalities(rep: VerifyReport, G: FiniteGroup, F: Subgroup, R: int, index: int,
                     pi, caps: Caps) -> None:
    primes = sorted(set(int(p) for p in pi) | set(factorize(G.order)))
    r = rank(G, caps=caps)
    rep.quantities["rank"] = r
    if r > R:
        return _precondition(rep, f"rank(G) = {r} exceeds R = {R}")
    N = frattini_series(G, index, F, caps).terms[index]
    if not is_normal(G, N):
        raise SpecError("iterated Frattini subgroup of F is not normal in G")
    Q, _ = quotient(G, N, check=False)
    rq = rank(Q, caps=caps)
    pr = {p: p_rank(G, p, caps=caps) for p in primes}
    prq = {p: p_rank(Q, p, caps=caps) for p in primes}
    rep.quantities.update(index=index, kernel_order=N.order, quotient_order=Q.order,
                          quotient_rank=rq, p_ranks=pr, quotient_p_ranks=prq)
    bad = [f"rank_{p}" for p in primes if pr[p] <= R and pr[p] != prq[p]]
    if rq != r:
        bad.insert(0, "rank")
    if bad:
        rep.verdict = FAIL
        rep.witness = {"violated": bad}


def _check_f(rep: VerifyReport, G: FiniteGroup, F: Subgroup) -> bool:
    if not is_normal(G, F):
        _precondition(rep, "F is not normal in G")
        return False
    if not is_nilpotent(G, F):
        _precondition(rep, "F is not nilpotent")
        return False
    return True


def verify_thm_2_1(G: FiniteGroup, F: Subgroup | None = None, R: int | None = None, pi=(),
                   caps: Caps = DEFAULT_CAPS) -> VerifyReport:
    """Ranks of G agree with those of ``G / Φ^{2R+1}(F)`` for F with powerful Sylows."""
    F = G.whole if F is None else F

    def body(rep: VerifyReport):
        RR = R if R is not None else rank(G, caps=caps)
        rep.inputs["R"] = RR
        if not _check_f(rep, G, F):
            return
        pw = _sylows_powerful(G, F, caps)
        rep.quantities["sylows_powerful"] = pw
        if not all(pw.values()):
            return _precondition(rep, "a Sylow subgroup of F is not powerful")
        _rank_equalities(rep, G, F, RR, 2 * RR + 1, pi, caps)

    inputs = {"group": _label(G), "order": G.order, "F_order": F.order, "pi": sorted(pi)}
    return run_check("thm-2-1", inputs, body)


def verify_cor_2_2(G: FiniteGroup, F: Subgroup | None = None, R: int | None = None, pi=(),
                   caps: Caps = DEFAULT_CAPS) -> VerifyReport:
    """Nilpotent F only: ``Φ^{ceil(log2 R)+1}(F)`` has powerful Sylows, then index ``cor_index(R)``."""
    F = G.whole if F is None else F

    def body(rep: VerifyReport):
        RR = R if R is not None else max(rank(G, caps=caps), 1)
        rep.inputs["R"] = RR
        if not _check_f(rep, G, F):
            return
        k = ceil_log2(RR) + 1
        Fk = frattini_series(G, k, F, caps).terms[k]
        pw = _sylows_powerful(G, Fk, caps)
        rep.quantities["powerful_index"] = k
        rep.quantities["powerful_sylows"] = pw
        if rank(G, caps=caps) <= RR and not all(pw.values()):
            rep.verdict = FAIL
            rep.witness = {"violated": f"Sylows of Phi^{k}(F) powerful",
                           "primes": [p for p, ok in pw.items() if not ok]}
            return
        _rank_equalities(rep, G, F, RR, cor_index(RR), pi, caps)

    inputs = {"group": _label(G), "order": G.order, "F_order": F.order, "pi": sorted(pi)}
    return run_check("cor-2-2", inputs, body)


# ---------------------------------------------------------------------------
# Jordan levels beyond enumeration


def _lattice_rank(model, caps: Caps) -> int:
    r = model.rank()
    if r is None:
        lo, hi = model.rank_bounds()
        raise Undecided("tower_order", caps.tower_order, f"rank bounds {lo} <= rank <= {hi} do not meet")
    return r


def _quotient_rank_lattice(model, kernel, r: int, caps: Caps) -> int:
    # a nontrivial kernel would need the quotient's own subgroup structure
    if not kernel.is_trivial:
        raise Undecided("tower_order", caps.tower_order,
                        f"quotient of a level of order {model.p}^{model.log_order} by a nontrivial kernel")
    return r


def verify_thm_1_3_lattice(fam: JordanMetabelian, depth: int, caps: Caps = DEFAULT_CAPS) -> VerifyReport:
    """``verify_thm_1_3`` for a Jordan level, on its lattice model."""
    label = f"{describe_family(fam)} depth {depth}"

    def body(rep: VerifyReport):
        M = JordanLevelModel(fam, depth)
        r = _lattice_rank(M, caps)
        j = j_of(r)
        N = M.frattini_series(M.G, j)[j]
        rq = _quotient_rank_lattice(M, N, r, caps)
        p = fam.p
        rep.quantities.update(rank=r, j=j, kernel_order=p ** N.log_order,
                              quotient_order=p ** (M.log_order - N.log_order),
                              quotient_rank=rq, proper=not N.is_trivial, route="lattice")
        if rq != r:
            rep.verdict = FAIL
            rep.witness = {"violated": "rank(G) = rank(G/Phi^j(G))", "rank": r, "quotient_rank": rq}

    return run_check("thm-1-3", {"group": label, "order": p_order(JordanLevelModel(fam, depth))}, body)


def verify_thm_2_1_lattice(fam: JordanMetabelian, depth: int, R: int,
                           caps: Caps = DEFAULT_CAPS) -> VerifyReport:
    """``verify_thm_2_1`` for a Jordan level with its designated F, on the lattice model."""
    label = f"{describe_family(fam)} depth {depth}"
    model = JordanLevelModel(fam, depth)

    def body(rep: VerifyReport):
        p = fam.p
        powerful = model.F.is_powerful()
        rep.quantities["sylows_powerful"] = {p: powerful}
        if not powerful:
            return _precondition(rep, "a Sylow subgroup of F is not powerful")
        r = _lattice_rank(model, caps)
        rep.quantities["rank"] = r
        if r > R:
            return _precondition(rep, f"rank(G) = {r} exceeds R = {R}")
        index = 2 * R + 1
        N = model.frattini_series(model.F, index)[index]
        rq = _quotient_rank_lattice(model, N, r, caps)
        rep.quantities.update(index=index, kernel_order=p ** N.log_order,
                              quotient_order=p ** (model.log_order - N.log_order), quotient_rank=rq,
                              p_ranks={p: r}, quotient_p_ranks={p: rq}, route="lattice")
        if rq != r:
            rep.verdict = FAIL
            rep.witness = {"violated": ["rank", f"rank_{p}"]}

    inputs = {"group": label, "order": p_order(model), "F_order": fam.p ** model.F.log_order,
              "pi": [fam.p], "R": R}
    return run_check("thm-2-1", inputs, body)


def p_order(model) -> int:
    return model.p ** model.log_order


# ---------------------------------------------------------------------------
# Omega_1 counts


def verify_hl(G: FiniteGroup, p: int | None = None, caps: Caps = DEFAULT_CAPS) -> VerifyReport:
    """Powerful p-group: ``|Ω₁(G)| = p^{d(G)}``."""

    def body(rep: VerifyReport):
        ps = factorize(G.order)
        pp = p if p is not None else (next(iter(ps)) if len(ps) == 1 else None)
        if pp is None or set(ps) - {pp}:
            return _precondition(rep, "not a p-group")
        rep.inputs["p"] = pp
        if not is_powerful(G, pp):
            return _precondition(rep, "not powerful")
        d = min_generators(G, caps=caps)
        w = int(omega1(G, pp).size)
        rep.quantities.update(d=d, omega1=w)
        if w != pp ** d:
            rep.verdict = FAIL
            rep.witness = {"violated": "|Omega_1(G)| = p^d(G)", "omega1": w, "p^d": pp ** d}

    return run_check("hl", {"group": _label(G), "order": G.order}, body)


def verify_thm_1_4(fam: ProPFamily, caps: Caps = DEFAULT_CAPS, depths=(1, 2, 3),
                   readings: int = 2) -> VerifyReport:
    """``dim = d(G) - log_p|Ω₁(G)| = d(G) - d(T)`` for a powerful pro-p family."""

    def body(rep: VerifyReport):
        if isinstance(fam, FamilyProduct):
            raise SpecError("dimension identity is stated for a single prime")
        p = fam.p
        checked = []
        for k in depths:
            lv = finite_quotient(fam, k, caps)
            if not is_powerful(lv.group, p):
                rep.quantities["powerful_depths"] = checked
                return _precondition(rep, f"level {k} is not powerful")
            checked.append(k)
        rep.quantities["powerful_depths"] = checked
        d, k_stable = _stable_d(fam, caps, readings)
        w = omega1_stable(fam, p, caps, readings=readings)
        t = torsion_rank(fam, caps)
        dim = dim_analytic(fam)
        rep.quantities.update(dim=dim, d=d, stable_depth=k_stable, omega1_log=w, torsion_rank=t)
        bad = []
        if dim != d - w:
            bad.append("dim = d(G) - log_p|Omega_1(G)|")
        if dim != d - t:
            bad.append("dim = d(G) - d(T)")
        if bad:
            rep.verdict = FAIL
            rep.witness = {"violated": bad}

    return run_check("thm-1-4", {"family": describe_family(fam)}, body)


def _stable_d(fam: ProPFamily, caps: Caps, readings: int, on_f: bool = False) -> tuple[int, int]:
    history: list[int] = []
    k = 1
    while True:
        lv = finite_quotient(fam, k, caps)
        history.append(min_generators(lv.group, lv.F if on_f else None, caps))
        if len(history) >= readings and len(set(history[-readings:])) == 1:
            return history[-1], k
        k += 1


# ---------------------------------------------------------------------------
# axiom deciders


@dataclass
class RankAxiomTrace:
    """Intermediate values of the rank-axiom pipeline for one (G, pi, r)."""
    r: int
    m: int
    R: int
    layer_ranks: list[int] = field(default_factory=list)
    layers_ok: bool = False
    gamma_ok: bool | None = None
    quotient_order: int | None = None
    quotient_profile: dict | None = None

    def decide(self, rvec: dict[int, int], pi) -> bool:
        if not (self.layers_ok and self.gamma_ok) or self.quotient_profile is None:
            return False
        prof = self.quotient_profile
        if prof["rank"] != self.r:
            return False
        return all(prof["p_ranks"].get(p, 0) == int(rvec.get(p, 0)) for p in pi)


def _layer_rank(order_ratio: int) -> int:
    """Rank of an abelian group of squarefree exponent with the given order."""
    return max((e for e in factorize(order_ratio).values()), default=0)


def rank_axiom_trace(G: FiniteGroup, pi, r: int, caps: Caps = DEFAULT_CAPS) -> RankAxiomTrace:
    pi = sorted(set(int(p) for p in pi))
    extra = set(factorize(G.order)) - set(pi)
    if extra:
        raise SpecError(f"primes {sorted(extra)} divide |G| but are not in pi")
    if not is_nilpotent(G):
        raise SpecError("rank-axiom pipeline needs a nilpotent group")
    if r < 0:
        raise SpecError("r must be nonnegative")
    tr = rank_axiom_trace_prefix(G, pi, r, caps)
    if not (tr.layers_ok and tr.gamma_ok):
        return tr
    F = frattini_series(G, tr.m, caps=caps).terms[tr.m]
    R = tr.R
    N = frattini_series(G, 2 * R + 1, F, caps).terms[2 * R + 1]
    Q, _ = quotient(G, N, check=False)
    prof = rank_profile(Q, pi, caps)
    tr.quotient_order = Q.order
    tr.quotient_profile = {"rank": prof.rank, "p_ranks": dict(prof.p_ranks)}
    return tr


def decide_rank_axiom(G: FiniteGroup, pi, r: int, rvec: dict[int, int],
                      caps: Caps = DEFAULT_CAPS, theta_candidates=None) -> bool:
    """Semantic run of the rank-axiom certificate on a finite nilpotent pi-group.

    Layers ``Φ^j/Φ^{j+1}`` of rank <= r for j <= m(r), every commutator of
    ``F = Φ^m(G)`` a 2q-th power in F, and ``G/Φ^{2R+1}(F)`` with rank r and
    p-ranks ``rvec``. With ``theta_candidates`` the last step is evaluated as
    a materialized disjunction of quotient-isomorphism sentences instead.
    """
    pi = sorted(set(int(p) for p in pi))
    if theta_candidates is None:
        return rank_axiom_trace(G, pi, r, caps).decide(rvec, pi)
    return _decide_materialized(G, pi, r, rvec, theta_candidates, caps)


def _decide_materialized(G, pi, r, rvec, candidates, caps) -> bool:
    from ..fol.fast import eval_fast
    from ..fol.schemas import build_theta
    from ..fol.syntax import Eq, One, Var
    m = m_of(r)
    R = (m + 1) * r
    tr = rank_axiom_trace_prefix(G, pi, r, caps)
    if not (tr.layers_ok and tr.gamma_ok):
        return False
    F = frattini_series(G, m, caps=caps).terms[m]
    N = frattini_series(G, 2 * R + 1, F, caps).terms[2 * R + 1]
    if N.order != 1:
        raise UnsupportedSchema("materialized theta needs a trivial kernel (defined by x = 1)")
    wanted = []
    for B in candidates:
        prof = rank_profile(B, pi, caps)
        if prof.rank == r and all(prof.p_ranks.get(p, 0) == int(rvec.get(p, 0)) for p in pi):
            wanted.append(B)
    if not wanted:
        return False
    return eval_fast(G, build_theta(Eq(Var("x"), One()), wanted), caps)


def rank_axiom_trace_prefix(G: FiniteGroup, pi, r: int, caps: Caps = DEFAULT_CAPS) -> RankAxiomTrace:
    """The layer and semi-powerful steps only."""
    q = math.prod(pi)
    m = m_of(r)
    tr = RankAxiomTrace(r, m, (m + 1) * r)
    chain = frattini_series(G, m + 1, caps=caps)
    tr.layer_ranks = [_layer_rank(chain.terms[j].order // chain.terms[j + 1].order) for j in range(m + 1)]
    tr.layers_ok = all(x <= r for x in tr.layer_ranks)
    if tr.layers_ok:
        tr.gamma_ok = bool(is_semi_powerful(G, q, chain.terms[m]))
    return tr


def dimension_by_prime(fam: ProPFamily, caps: Caps = DEFAULT_CAPS, readings: int = 2) -> dict[int, int]:
    """``d - log_p|Ω₁|`` of the designated powerful subgroup, per prime of the family."""
    if isinstance(fam, FamilyProduct):
        out = {}
        for f in fam.factors:
            out.update(dimension_by_prime(f, caps, readings))
        return out
    d, _ = _stable_d(fam, caps, readings, on_f=True)
    w = omega1_stable(fam, fam.p, caps, readings=readings, on_f=True)
    return {fam.p: d - w}


def decide_dim_axiom(fam: ProPFamily, pi, r: int, dvec: dict[int, int],
                     caps: Caps = DEFAULT_CAPS, rank_depths=(2,)) -> bool:
    """Dimension of each Sylow pro-p part equals ``dvec[p]`` (family of rank r).

    The rank precondition is checked with the rank-axiom pipeline on the
    levels in ``rank_depths``; a mismatch raises SpecError.
    """
    pi = sorted(set(int(p) for p in pi))
    fp = family_primes(fam)
    if set(fp) - set(pi):
        raise SpecError("family primes must lie in pi")
    for k in rank_depths:
        lv = finite_quotient(fam, k, caps)
        prof = rank_profile(lv.group, pi, caps)
        if not decide_rank_axiom(lv.group, pi, r, prof.p_ranks, caps):
            raise SpecError(f"family level {k} does not have rank {r}")
    dims = dimension_by_prime(fam, caps)
    return all(dims.get(p, 0) == int(dvec.get(p, 0)) for p in pi)
