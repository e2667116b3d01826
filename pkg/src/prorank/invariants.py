"""Generator numbers, Frattini machinery, ranks, Sylow subgroups and power conditions.

Most functions accept an optional subgroup ``H`` of ``G`` and then work inside
it without re-tabling, so invariants of subgroups of large structured groups
stay cheap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import NotPGroupError, Undecided
from .group import (FiniteGroup, SemidirectLaw, Subgroup, close, commutator_subgroup,
                    cyclic_subgroups, factorize, is_nilpotent,
                    normal_closure, normalizer_mask, p_elements, p_part, power_subgroup)
from .subgroups import all_subgroups, iter_nilpotent_waves, maximal_subgroups


@dataclass(frozen=True)
class RankProfile:
    rank: int
    p_ranks: dict = field(default_factory=dict)
    mlr: int = 0

    def as_dict(self) -> dict:
        return {"rank": self.rank, "p_ranks": {str(p): r for p, r in sorted(self.p_ranks.items())},
                "mlr": self.mlr}


@dataclass(frozen=True)
class FrattiniChain:
    base: FiniteGroup
    terms: tuple[Subgroup, ...]
    fixpoint: int | None = None  # index at which the series stabilized, if it did

    @property
    def orders(self) -> list[int]:
        return [t.order for t in self.terms]


def _sub(G: FiniteGroup, H: Subgroup | None) -> Subgroup:
    return G.whole if H is None else H


def _log(n: int, p: int) -> int:
    e = 0
    while n % p == 0 and n > 1:
        n //= p
        e += 1
    if n != 1:
        raise NotPGroupError(f"{n} is not a power of {p}")
    return e


def p_group_prime(order: int) -> int | None:
    ps = factorize(order)
    return next(iter(ps)) if len(ps) == 1 else None


# ---------------------------------------------------------------------------
# Frattini subgroups


def p_frattini(G: FiniteGroup, p: int, H: Subgroup | None = None) -> Subgroup:
    """``[H,H] H^p`` as the normal closure of generator p-th powers and commutators."""
    H = _sub(G, H)
    gens = np.asarray(H.generators, dtype=np.int64)
    if gens.size == 0:
        return G.trivial
    seeds = [np.asarray(G.power(gens, p)).ravel(),
             np.asarray(G.commutator(gens[:, None], gens[None, :])).ravel()]
    return normal_closure(G, np.concatenate(seeds), within=H)


def frattini_with_method(G: FiniteGroup, H: Subgroup | None = None,
                         caps: Caps = DEFAULT_CAPS) -> tuple[Subgroup, str]:
    """Frattini subgroup plus the method used.

    Nilpotent groups use ``[H,H] H^e`` with ``e`` the product of the primes
    dividing ``|H|``; other groups intersect the maximal subgroups.
    """
    H = _sub(G, H)
    if H.order == 1:
        return G.trivial, "trivial"
    primes = sorted(factorize(H.order))
    if len(primes) == 1:
        return p_frattini(G, primes[0], H), "p-formula"
    if is_nilpotent(G, H):
        return p_frattini(G, math.prod(primes), H), "nilpotent-formula"
    if H.order > caps.subgroups:
        raise Undecided("subgroups", caps.subgroups, "Frattini of a non-nilpotent group")
    subs = all_subgroups(G, caps, within=H)
    mask = np.ones(G.order, dtype=bool)
    for M in maximal_subgroups(G, caps, [S for S in subs]):
        mask &= M.mask
    return Subgroup.from_mask(G, mask), "maximal-intersection"


def frattini(G: FiniteGroup, H: Subgroup | None = None, caps: Caps = DEFAULT_CAPS) -> Subgroup:
    return frattini_with_method(G, H, caps)[0]


def frattini_by_maximals(G: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> Subgroup:
    """Intersection of all maximal subgroups (exhaustive oracle)."""
    mask = np.ones(G.order, dtype=bool)
    for M in maximal_subgroups(G, caps):
        mask &= M.mask
    return Subgroup.from_mask(G, mask)


def frattini_series(G: FiniteGroup, j: int, H: Subgroup | None = None,
                    caps: Caps = DEFAULT_CAPS) -> FrattiniChain:
    """``Φ^0 ⊇ Φ^1 ⊇ ... ⊇ Φ^j`` of H (default G); stops early at a fixpoint."""
    terms = [_sub(G, H)]
    fix = None
    for i in range(j):
        nxt = frattini(G, terms[-1], caps)
        if nxt.order == terms[-1].order:
            fix = i
            break
        terms.append(nxt)
    if fix is None and terms[-1].order == 1:
        fix = len(terms) - 1
    # pad so that terms[i] = Φ^i for every i <= j
    while len(terms) <= j:
        terms.append(terms[-1])
    return FrattiniChain(G, tuple(terms), fix)


def iterated_frattini(G: FiniteGroup, j: int, H: Subgroup | None = None,
                      caps: Caps = DEFAULT_CAPS) -> Subgroup:
    return frattini_series(G, j, H, caps).terms[j]


# ---------------------------------------------------------------------------
# Sylow subgroups


def sylow(G: FiniteGroup, p: int, H: Subgroup | None = None,
          caps: Caps = DEFAULT_CAPS) -> Subgroup:
    H = _sub(G, H)
    target = p_part(H.order, p)
    if target == 1:
        return G.trivial
    if target == H.order:
        return H
    if is_nilpotent(G, H):
        mask = np.zeros(G.order, dtype=bool)
        mask[p_elements(G, p, H.elements)] = True
        return Subgroup.from_mask(G, mask)
    # greedy growth through normalizers: N(P)/P has a p-element while P is not Sylow
    el = H.elements
    pe = G.power(el, target)
    start = p_elements(G, p, el)
    start = start[start != 0]
    P = Subgroup.from_mask(G, close(G, [int(start[0])]), (int(start[0]),))
    while P.order < target:
        cand = el[~P.mask[el] & P.mask[pe]]
        cand = cand[normalizer_mask(G, P, cand)]
        if cand.size == 0:
            return _sylow_by_scan(G, p, H, caps)
        x = int(cand[0])
        P = Subgroup.from_mask(G, close(G, P.generators, P.mask, [x]), P.generators + (x,))
    return P


def _sylow_by_scan(G, p, H, caps):
    target = p_part(H.order, p)
    for S in all_subgroups(G, caps, within=H):
        if S.order == target:
            return S
    raise Undecided("search", caps.search, f"Sylow {p}-subgroup")


# ---------------------------------------------------------------------------
# generator numbers


def min_generators(G: FiniteGroup, H: Subgroup | None = None, caps: Caps = DEFAULT_CAPS) -> int:
    """Exact d(H)."""
    H = _sub(G, H)
    n = H.order
    if n == 1:
        return 0
    primes = sorted(factorize(n))
    if len(primes) == 1:
        p = primes[0]
        return _log(n // p_frattini(G, p, H).order, p)
    if is_nilpotent(G, H):
        # d of a nilpotent group is the largest d of its Sylow subgroups
        return max(min_generators(G, sylow(G, p, H), caps) for p in primes)
    return _min_generators_search(G, H, caps)


def _elementary_quotient_bound(G: FiniteGroup, H: Subgroup) -> int:
    best = 1
    for p in factorize(H.order):
        k = H.order // p_frattini(G, p, H).order
        if k > 1:
            best = max(best, _log(k, p))
    return best


def _min_generators_search(G: FiniteGroup, H: Subgroup, caps: Caps) -> int:
    lower = _elementary_quotient_bound(G, H)
    cyc = [C for C in cyclic_subgroups(G, H.elements) if C.generators]
    if len(cyc) == 1:
        return 1
    cyc.sort(key=lambda C: (-C.order, C.elements[1] if C.order > 1 else 0))
    reps = [C.generators[0] for C in cyc]
    budget = caps.search
    for s in range(lower, len(H.generators) + 1):
        for combo in itertools.combinations(range(len(reps)), s):
            budget -= 1
            if budget < 0:
                raise Undecided("search", caps.search, "minimal generating set")
            mask = close(G, [reps[i] for i in combo])
            if int(mask.sum()) == H.order:
                return s
    return len(H.generators)


# ---------------------------------------------------------------------------
# rank


def is_powerful(G: FiniteGroup, p: int, H: Subgroup | None = None) -> bool:
    """``[H,H] <= H^p`` (p odd) or ``[H,H] <= H^4`` (p = 2); H must be a p-group."""
    H = _sub(G, H)
    if H.order == 1:
        return True
    if p_group_prime(H.order) != p:
        raise NotPGroupError(f"subgroup of order {H.order} is not a {p}-group")
    D = commutator_subgroup(G, H)
    if D.order == 1:
        return True
    Pw = power_subgroup(G, 4 if p == 2 else p, H)
    return D <= Pw


def _p_group_rank(G: FiniteGroup, P: Subgroup, caps: Caps) -> int:
    p = p_group_prime(P.order)
    if p is None:
        return 0
    d_top = min_generators(G, P, caps)
    if is_powerful(G, p, P):
        # every subgroup of a powerful p-group needs at most d(P) generators
        return d_top
    if P.order > caps.subgroups:
        cert = _semidirect_certificate(G, P, caps)
        if cert is not None:
            return cert
        raise Undecided("subgroups", caps.subgroups, f"rank scan in order {P.order}")
    best = d_top
    dval: dict[bytes, int] = {}
    for wave in iter_nilpotent_waves(G, P):
        for H, M in wave:
            if M is None:
                dval[H.key] = 0
                continue
            ub = dval.get(M.key, _log(M.order, p)) + 1
            ub = min(ub, _log(H.order, p))
            if ub <= best:
                dval[H.key] = ub
                continue
            d = min_generators(G, H, caps)
            dval[H.key] = d
            best = max(best, d)
    return best


def _semidirect_certificate(G: FiniteGroup, P: Subgroup, caps: Caps) -> int | None:
    """Exact rank of a whole cyclic-by-abelian group from matching bounds.

    Upper bound ``rank(A) + rank(G/A)`` with A the abelian base; lower bound
    from ``d`` of the subgroups ``<c^t> A``. Returns None when they differ.
    """
    law = G.law
    if not isinstance(law, SemidirectLaw) or P.order != G.order:
        return None
    base = Subgroup(G, np.arange(law.size), gens=[s for s in law.base.strides], _trusted=True)
    d_base = min_generators(G, base, caps)
    upper = d_base + (1 if law.m > 1 else 0)
    lower = max(d_base, min_generators(G, P, caps))
    step = p_group_prime(law.m) or law.m
    t = step
    while lower < upper and t < law.m:
        K = Subgroup.from_mask(G, close(G, base.generators, base.mask, [t * law.size]))
        lower = max(lower, min_generators(G, K, caps))
        t *= step
    return upper if lower == upper else None


def rank(G: FiniteGroup, H: Subgroup | None = None, caps: Caps = DEFAULT_CAPS) -> int:
    """Prüfer rank: the largest d over all subgroups."""
    H = _sub(G, H)
    if H.order == 1:
        return 0
    primes = sorted(factorize(H.order))
    if is_nilpotent(G, H):
        return max(_p_group_rank(G, sylow(G, p, H), caps) for p in primes)
    return rank_by_scan(G, H, caps)


def rank_by_scan(G: FiniteGroup, H: Subgroup | None = None, caps: Caps = DEFAULT_CAPS) -> int:
    """Generic path: max of min_generators over the full subgroup list."""
    H = _sub(G, H)
    best = 0
    for K in all_subgroups(G, caps, within=H):
        if len(K.generators) <= best:
            continue
        best = max(best, min_generators(G, K, caps))
    return best


def p_rank(G: FiniteGroup, p: int, H: Subgroup | None = None, caps: Caps = DEFAULT_CAPS) -> int:
    S = sylow(G, p, H, caps)
    return 0 if S.order == 1 else _p_group_rank(G, S, caps)


def rank_profile(G: FiniteGroup, pi, caps: Caps = DEFAULT_CAPS,
                 H: Subgroup | None = None) -> RankProfile:
    H = _sub(G, H)
    pi = sorted(set(int(p) for p in pi))
    extra = set(factorize(H.order)) - set(pi)
    if extra:
        raise ValueError(f"primes {sorted(extra)} divide the order but are not in pi")
    pr = {p: p_rank(G, p, H, caps) for p in pi}
    return RankProfile(rank(G, H, caps), pr, max(pr.values(), default=0))


def max_local_rank(G: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> int:
    return max((p_rank(G, p, caps=caps) for p in factorize(G.order)), default=0)


# ---------------------------------------------------------------------------
# element sets


def omega1(G: FiniteGroup, p: int, H: Subgroup | None = None) -> np.ndarray:
    el = _sub(G, H).elements
    return el[np.asarray(G.power(el, p)) == 0]


def _unique_products(G: FiniteGroup, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    out = np.zeros(G.order, dtype=bool)
    step = max(1, 2_000_000 // max(Y.size, 1))
    for lo in range(0, X.size, step):
        out[np.asarray(G.mul(X[lo:lo + step, None], Y[None, :])).ravel()] = True
    return np.flatnonzero(out)


def commutator_set(G: FiniteGroup, H: Subgroup | None = None) -> np.ndarray:
    el = _sub(G, H).elements
    out = np.zeros(G.order, dtype=bool)
    step = max(1, 2_000_000 // max(el.size, 1))
    for lo in range(0, el.size, step):
        out[np.asarray(G.commutator(el[lo:lo + step, None], el[None, :])).ravel()] = True
    return np.flatnonzero(out)


def power_set(G: FiniteGroup, k: int, H: Subgroup | None = None) -> np.ndarray:
    """The set ``{h^k}`` (not the subgroup it generates)."""
    return np.unique(np.asarray(G.power(_sub(G, H).elements, k)))


def verbal_set(G: FiniteGroup, r: int, q: int, H: Subgroup | None = None) -> np.ndarray:
    """Values of ``[x1,y1]...[xr,yr] z^q`` over H."""
    C = commutator_set(G, H)
    acc = np.array([0])
    for _ in range(r):
        acc = _unique_products(G, acc, C)
    return _unique_products(G, acc, power_set(G, q, H))


def is_semi_powerful(G: FiniteGroup, q: int, H: Subgroup | None = None) -> bool:
    """Every commutator is a (2q)-th power of an element."""
    pw = np.zeros(G.order, dtype=bool)
    pw[power_set(G, 2 * q, H)] = True
    return bool(pw[commutator_set(G, H)].all())
