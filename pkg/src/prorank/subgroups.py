"""Complete subgroup enumeration with canonical-set deduplication.

Two strategies share one contract (a duplicate-free list sorted by order,
then element tuple):

* generic groups: layered closure; seed with the cyclic subgroups and adjoin
  one cyclic subgroup at a time to every known subgroup;
* nilpotent groups (or subgroups of one): every subgroup ``H > 1`` has a
  normal subgroup ``M`` of prime index, so ``H = M<g>`` with ``g`` normalizing
  ``M`` and ``g^q`` in ``M``. Extending wave by wave from the trivial group
  reaches everything while only touching normalizers.
"""

from __future__ import annotations

from typing import Callable, Iterator

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import Undecided
from .group import (FiniteGroup, Subgroup, close, cyclic_subgroups, factorize,
                    is_nilpotent, normalizer_mask)


def all_subgroups(G: FiniteGroup, caps: Caps = DEFAULT_CAPS,
                  within: Subgroup | None = None) -> list[Subgroup]:
    """Every subgroup of G (or of ``within``), sorted by (order, elements)."""
    amb = G.whole if within is None else within
    if amb.order > caps.subgroups:
        raise Undecided("subgroups", caps.subgroups, f"enumeration in order {amb.order}")
    if is_nilpotent(G, amb):
        subs = [H for wave in iter_nilpotent_waves(G, amb) for H, _ in wave]
    else:
        subs = _layered_closure(G, amb)
    return sorted(subs, key=Subgroup.sort_key)


def _layered_closure(G: FiniteGroup, amb: Subgroup) -> list[Subgroup]:
    cyclics = cyclic_subgroups(G, amb.elements)
    found: dict[bytes, Subgroup] = {C.key: C for C in cyclics}
    queue = list(found.values())
    head = 0
    while head < len(queue):
        K = queue[head]
        head += 1
        for C in cyclics:
            if not C.generators:
                continue
            x = C.generators[0]
            if K.mask[x]:
                continue
            mask = close(G, K.generators, K.mask, [x])
            key = np.packbits(mask).tobytes()
            if key not in found:
                H = Subgroup.from_mask(G, mask, K.generators + (x,))
                found[key] = H
                queue.append(H)
    return list(found.values())


def iter_nilpotent_waves(G: FiniteGroup, amb: Subgroup,
                         keep: Callable[[Subgroup], bool] | None = None,
                         ) -> Iterator[list[tuple[Subgroup, Subgroup | None]]]:
    """Yield waves of ``(H, M)`` pairs grouped by number of prime factors of ``|H|``.

    ``amb`` must be nilpotent. ``M`` is the prime-index subgroup ``H`` was
    first reached from (None for the trivial group); each ``H`` records its
    generators along the extension chain. ``keep`` may veto extension of a subgroup (its
    supergroups are then reached only through other chains, if at all); the
    default extends everything, giving the complete lattice.
    """
    elems = amb.elements
    primes = sorted(factorize(amb.order))
    powers = {q: G.power(elems, q) for q in primes}
    wave: list[tuple[Subgroup, Subgroup | None]] = [(G.trivial, None)]
    seen: set[bytes] = {G.trivial.key}
    while wave:
        yield wave
        nxt: list[Subgroup] = []
        for M, _ in wave:
            if keep is not None and not keep(M):
                continue
            if M.order == amb.order:
                continue
            outside = ~M.mask[elems]
            for q in primes:
                if (amb.order // M.order) % q:
                    continue
                cand = elems[outside & M.mask[powers[q]]]
                cand = cand[normalizer_mask(G, M, cand)]
                while cand.size:
                    g = int(cand[0])
                    parts = [M.elements]
                    gi = g
                    for _ in range(q - 1):
                        parts.append(np.asarray(G.mul(gi, M.elements), dtype=np.int64))
                        gi = int(G.mul(gi, g))
                    hel = np.concatenate(parts)
                    hmask = np.zeros(G.order, dtype=bool)
                    hmask[hel] = True
                    cand = cand[~hmask[cand]]
                    key = np.packbits(hmask).tobytes()
                    if key in seen:
                        continue
                    seen.add(key)
                    H = Subgroup(G, np.flatnonzero(hmask), M.generators + (g,), _trusted=True)
                    H._key = key
                    nxt.append((H, M))
            M.release()
        wave = nxt


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    return Subgroup.from_mask(G, normalizer_mask(G, H))


def normal_subgroups(G: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> list[Subgroup]:
    from .group import is_normal
    return [N for N in all_subgroups(G, caps) if is_normal(G, N)]


def maximal_subgroups(G: FiniteGroup, caps: Caps = DEFAULT_CAPS,
                      subs: list[Subgroup] | None = None) -> list[Subgroup]:
    subs = all_subgroups(G, caps) if subs is None else subs
    proper = [H for H in subs if H.order < G.order]
    out = []
    for H in proper:
        if not any(K.order > H.order and H <= K for K in proper):
            out.append(H)
    return out
