"""Search for runaway couples: the witnesses for rank = mlr + 1."""

from __future__ import annotations

from dataclasses import dataclass

from ..config import DEFAULT_CAPS, Caps
from ..errors import SpecError
from ..group import FiniteGroup, Subgroup, factorize, is_normal, is_prime
from ..invariants import max_local_rank, p_frattini, p_rank, rank
from ..subgroups import all_subgroups
from .report import FAIL, VerifyReport, run_check


@dataclass
class RunawayCouple:
    H: Subgroup
    N: Subgroup
    p: int
    q: int
    rank_witness: int
    scalar: int  # a fixed element of H \ N acts on N/Φ_p(N) as y -> y^scalar

    def describe(self) -> dict:
        return {"H_order": self.H.order, "N_order": self.N.order, "p": self.p, "q": self.q,
                "rank_witness": self.rank_witness, "scalar": self.scalar,
                "H_generators": list(self.H.generators), "N_generators": list(self.N.generators)}


def _log(n: int, p: int) -> int:
    k = 0
    while n % p == 0 and n > 1:
        n //= p
        k += 1
    return k


def power_scalar(G: FiniteGroup, x: int, N: Subgroup, Phi: Subgroup, p: int) -> int | None:
    """k with ``x^-1 y x = y^k`` modulo Phi for every y in N, or None."""
    gens = [int(y) for y in N.generators if not Phi.mask[y]]
    if not gens:
        return None
    xinv = int(G.inverse[x])
    conj = [int(G.mul(G.mul(xinv, y), x)) for y in gens]
    y0, c0 = gens[0], conj[0]
    k = next((k for k in range(1, p)
              if Phi.mask[int(G.mul(G.inverse[int(G.power(y0, k))], c0))]), None)
    if k is None:
        return None
    for y, c in zip(gens[1:], conj[1:]):
        if not Phi.mask[int(G.mul(G.inverse[int(G.power(y, k))], c))]:
            return None
    return k


def iter_runaway_couples(G: FiniteGroup, p: int, caps: Caps = DEFAULT_CAPS):
    """All couples in deterministic order (H by size then elements, N likewise)."""
    if not is_prime(p) or p == 2:
        raise SpecError("runaway couples are defined for odd primes")
    if G.order % p:
        return
    subs = all_subgroups(G, caps)
    by_order: dict[int, list[Subgroup]] = {}
    for S in subs:
        by_order.setdefault(S.order, []).append(S)
    for H in subs:
        for q in sorted(factorize(H.order)):
            if q == p or (p - 1) % q:
                continue
            for N in by_order.get(H.order // q, []):
                if not N <= H or not is_normal(G, N, within=H):
                    continue
                Phi = p_frattini(G, p, N)
                s = _log(N.order // Phi.order, p)
                if s == 0:
                    continue
                x = int(H.elements[~N.mask[H.elements]][0])
                k = power_scalar(G, x, N, Phi, p)
                if k is None or k % p == 1:
                    continue
                yield RunawayCouple(H, N, p, q, s, k)


def find_runaway_couple(G: FiniteGroup, p: int, caps: Caps = DEFAULT_CAPS,
                        rank_witness: int | None = None) -> RunawayCouple | None:
    """First couple with the requested witness, or the one with the largest witness."""
    best = None
    top = p_rank(G, p, caps=caps) if G.order % p == 0 else 0
    for c in iter_runaway_couples(G, p, caps):
        if rank_witness is not None:
            if c.rank_witness == rank_witness:
                return c
            continue
        if best is None or c.rank_witness > best.rank_witness:
            best = c
            if best.rank_witness >= top:
                break
    return best


def verify_lucchini(G: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> VerifyReport:
    """``rank <= mlr + 1``, with equality exactly when a couple of witness mlr exists."""

    def body(rep: VerifyReport):
        r = rank(G, caps=caps)
        mlr = max_local_rank(G, caps)
        found = None
        for p in sorted(factorize(G.order)):
            if p == 2:
                continue
            c = find_runaway_couple(G, p, caps, rank_witness=mlr)
            if c is not None:
                found = c
                break
        rep.quantities.update(rank=r, mlr=mlr, couple=found is not None)
        if found is not None:
            rep.witness = found.describe()
        if r > mlr + 1:
            rep.verdict = FAIL
            rep.witness = {"violated": "rank <= mlr + 1"}
        elif (r == mlr + 1) != (found is not None):
            rep.verdict = FAIL
            rep.witness = {"violated": "rank = mlr + 1 iff a runaway couple exists",
                           **(found.describe() if found else {})}

    return run_check("lucchini", {"group": G.label or f"order-{G.order}", "order": G.order}, body)
