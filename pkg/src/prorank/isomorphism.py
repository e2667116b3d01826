"""Isomorphism testing: invariant fingerprint, then generator-image backtracking."""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import Undecided
from .group import (FiniteGroup, center, commutator_subgroup, factorize, quotient)


def abelian_invariants(A: FiniteGroup) -> tuple[int, ...]:
    """Prime-power cyclic factors of an abelian group, sorted ascending."""
    out: list[int] = []
    x = A.elements
    for p in sorted(factorize(A.order)):
        counts = [1]
        pk = 1
        while True:
            pk *= p
            c = int((A.power(x, pk) == 0).sum())
            counts.append(c)
            if c == counts[-2] and len(counts) > 2:
                break
            if c == A.order:
                counts.append(c)
                break
        logs = [round(np.log(c) / np.log(p)) for c in counts]
        # factors of order >= p^k number logs[k] - logs[k-1]
        ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        for k in range(len(ge)):
            exact = ge[k] - (ge[k + 1] if k + 1 < len(ge) else 0)
            out.extend([p ** (k + 1)] * exact)
    return tuple(sorted(out))


def abelianization(G: FiniteGroup) -> tuple[int, ...]:
    D = commutator_subgroup(G)
    Q, _ = quotient(G, D, check=False)
    return abelian_invariants(Q)


def centralizer_sizes(G: FiniteGroup) -> np.ndarray:
    n = G.order
    x = G.elements
    out = np.zeros(n, dtype=np.int64)
    step = max(1, 1_000_000 // max(n, 1))
    for lo in range(0, n, step):
        a = x[lo:lo + step, None]
        out[lo:lo + step] = (np.asarray(G.mul(a, x[None, :])) == np.asarray(G.mul(x[None, :], a))).sum(axis=1)
    return out


def fingerprint(G: FiniteGroup) -> tuple:
    hist = np.bincount(G.element_orders)
    return (G.order, tuple(hist.tolist()), center(G).order,
            commutator_subgroup(G).order, abelianization(G))


def is_isomorphic(G: FiniteGroup, H: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> bool:
    return find_isomorphism(G, H, caps) is not None


def find_isomorphism(G: FiniteGroup, H: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> np.ndarray | None:
    """Return an index map G -> H that is an isomorphism, or None."""
    if G.order != H.order:
        return None
    if G.order == 1:
        return np.zeros(1, dtype=np.int64)
    if fingerprint(G) != fingerprint(H):
        return None
    gens = list(G.generators)
    cg, ch = centralizer_sizes(G), centralizer_sizes(H)
    og, oh = G.element_orders, H.element_orders
    cands = [np.flatnonzero((oh == og[g]) & (ch == cg[g])) for g in gens]
    n = G.order
    budget = [caps.search]

    def extend(fmap, dom, level, img):
        # dom: mask of mapped domain (closed under gens[:level]); add gens[level] -> img
        fmap = fmap.copy()
        dom = dom.copy()
        g_all = np.asarray(gens[:level + 1], dtype=np.int64)
        h_all = np.asarray([*chosen[:level], img], dtype=np.int64)
        src = np.flatnonzero(dom)
        frontier_pairs = [(src, np.asarray([gens[level]]), np.asarray([img]))]
        while frontier_pairs:
            xs, gs, hs = frontier_pairs.pop()
            y = np.asarray(G.mul(xs[:, None], gs[None, :])).ravel()
            fy = np.asarray(H.mul(fmap[xs][:, None], hs[None, :])).ravel()
            known = dom[y]
            if np.any(fmap[y[known]] != fy[known]):
                return None
            y_new, fy_new = y[~known], fy[~known]
            if y_new.size == 0:
                continue
            y_new, first = np.unique(y_new, return_index=True)
            fy_first = fy_new[first]
            # all assignments to the same new element must agree
            inv = np.searchsorted(y_new, y[~known])
            if np.any(fy_first[inv] != fy_new):
                return None
            fmap[y_new] = fy_first
            dom[y_new] = True
            frontier_pairs.append((y_new, g_all, h_all))
        mapped = fmap[dom]
        if np.unique(mapped).size != mapped.size:
            return None
        return fmap, dom

    chosen: list[int] = []
    start_map = np.full(n, -1, dtype=np.int64)
    start_map[0] = 0
    start_dom = np.zeros(n, dtype=bool)
    start_dom[0] = True

    def search(level, fmap, dom):
        if level == len(gens):
            return fmap if dom.all() else None
        for img in cands[level]:
            budget[0] -= 1
            if budget[0] < 0:
                raise Undecided("search", caps.search, "isomorphism backtracking")
            res = extend(fmap, dom, level, int(img))
            if res is None:
                continue
            chosen.append(int(img))
            out = search(level + 1, *res)
            chosen.pop()
            if out is not None:
                return out
        return None

    return search(0, start_map, start_dom)
