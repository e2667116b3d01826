"""Deterministic test corpus of small groups.

Every entry is constructed explicitly (nothing is downloaded) and duplicates
up to isomorphism are dropped, keeping the first construction in a fixed
order: by order, named families before generic constructions, then label.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT_CAPS, Caps
from ..group import FiniteGroup, direct_product, is_prime
from ..isomorphism import fingerprint, is_isomorphic
from ..spec import (CayleySpec, CyclicSpec, GroupSpec, ProductSpec, SemidirectSpec, abelian,
                    permutation_group, semidirect)
from ..towers import jordan_matrix, jordan_order_exponent


@dataclass
class CorpusEntry:
    label: str
    provenance: str
    group: FiniteGroup
    spec: GroupSpec | None = None

    def group_spec(self) -> GroupSpec:
        if self.spec is not None:
            return self.spec
        return CayleySpec(tuple(tuple(int(v) for v in row) for row in self.group.table.tolist()))


def metacyclic(n: int, m: int, r: int, t: int, label: str) -> FiniteGroup:
    """``<a, b | a^n = 1, b^m = a^t, b a b^-1 = a^r>`` on indices ``j*n + i`` for ``a^i b^j``."""
    idx = np.arange(n * m)
    i, j = idx % n, idx // n
    rpow = np.array([pow(r, e, n) for e in range(m)], dtype=np.int64)
    I1, J1 = i[:, None], j[:, None]
    I2, J2 = i[None, :], j[None, :]
    e = I1 + I2 * rpow[J1]
    jj = J1 + J2
    wrap = jj >= m
    e = (e + np.where(wrap, t, 0)) % n
    jj = np.where(wrap, jj - m, jj)
    return FiniteGroup.from_table(jj * n + e, label=label)


def abelian_types(max_order: int, primes) -> list[tuple[int, ...]]:
    """All abelian groups of order <= max_order over ``primes`` as prime-power factor lists."""
    per_prime = []
    for p in sorted(primes):
        opts = []
        k = 0
        while p ** k <= max_order:
            for part in _partitions(k):
                opts.append(tuple(p ** a for a in part))
            k += 1
        per_prime.append(opts)
    out = []
    for combo in itertools.product(*per_prime):
        mods = tuple(m for part in combo for m in part)
        if math.prod(mods) <= max_order:
            out.append(mods)
    return sorted(out, key=lambda ms: (math.prod(ms), ms))


def _partitions(k: int, largest: int | None = None):
    if k == 0:
        yield ()
        return
    largest = k if largest is None else largest
    for a in range(min(k, largest), 0, -1):
        for rest in _partitions(k - a, a):
            yield (a,) + rest


def _abelian_label(mods) -> str:
    return "x".join(f"C{m}" for m in mods) if mods else "C1"


def _candidates(max_order: int, primes, caps: Caps) -> list[CorpusEntry]:
    primes = sorted(set(int(p) for p in primes))
    out: list[CorpusEntry] = []

    def add(label, prov, build, spec=None):
        out.append(CorpusEntry(label, prov, build(), spec))

    for mods in abelian_types(max_order, primes):
        lab = _abelian_label(mods)
        add(lab, "abelian", lambda m=mods, lab=lab: abelian(m, caps, label=lab),
            ProductSpec(tuple(CyclicSpec(m) for m in mods)) if len(mods) != 1 else CyclicSpec(mods[0]))

    if 2 in primes:
        k = 3
        while 2 ** k <= max_order:
            n = 2 ** (k - 1)
            add(f"D{n}", "dihedral", lambda n=n: metacyclic(n, 2, -1 % n, 0, f"D{n}"))
            add(f"Q{2 ** k}", "quaternion", lambda n=n, k=k: metacyclic(n, 2, -1 % n, n // 2, f"Q{2 ** k}"))
            if k >= 4:
                add(f"SD{2 ** k}", "semidihedral",
                    lambda n=n, k=k: metacyclic(n, 2, n // 2 - 1, 0, f"SD{2 ** k}"))
                add(f"M{2 ** k}", "modular", lambda n=n, k=k: metacyclic(n, 2, n // 2 + 1, 0, f"M{2 ** k}"))
            k += 1

    for p in primes:
        # split metacyclic C_{p^a} : C_{p^b} with a -> a^(1+p^s); powerful for s >= 1 (s >= 2 if p = 2)
        for a in range(2, 12):
            for b in range(1, 12):
                if p ** (a + b) > max_order:
                    continue
                for s in range(2 if p == 2 else 1, a):
                    if a - s > b:
                        continue
                    n, r = p ** a, 1 + p ** s
                    lab = f"C{n}:C{p ** b}[{r}]"
                    add(lab, "powerful metacyclic", lambda n=n, b=b, r=r, lab=lab: metacyclic(n, p ** b, r, 0, lab))
        if p > 2 and p ** 3 <= max_order:
            add(f"{p}^(1+2)+", "extraspecial exponent p",
                lambda p=p: semidirect(p, [p, p], jordan_matrix(2), caps, label=f"{p}^(1+2)+"),
                SemidirectSpec(p, (p, p), ((1, 0), (1, 1))))
            add(f"{p}^(1+2)-", "extraspecial exponent p^2",
                lambda p=p: metacyclic(p * p, p, 1 + p, 0, f"{p}^(1+2)-"))
        k = 1
        while p ** (3 * k) <= max_order:
            lab = f"Heis({p},{k})"
            add(lab, "Heisenberg mod p^k",
                lambda k=k, lab=lab: semidirect(p ** k, [p ** k] * 2, jordan_matrix(2), caps, label=lab),
                SemidirectSpec(p ** k, (p ** k,) * 2, ((1, 0), (1, 1))))
            k += 1
        # truncated Jordan-block metabelian groups
        for nn in range(2, p):
            depth = 1
            while True:
                e = jordan_order_exponent(p, nn, depth)
                if p ** (e + depth * nn) > max_order:
                    break
                lab = f"Jordan({p},{nn})_{depth}"
                M = jordan_matrix(nn)
                add(lab, "jordan_metabelian truncation",
                    lambda e=e, depth=depth, M=M, nn=nn, lab=lab:
                        semidirect(p ** e, [p ** depth] * nn, M, caps, label=lab),
                    SemidirectSpec(p ** e, (p ** depth,) * nn, tuple(tuple(int(v) for v in row) for row in M)))
                depth += 1

    # C_q acting on C_p^r by a scalar of order q
    for p in primes:
        for q in primes:
            if q == p or (p - 1) % q:
                continue
            s = next(x for x in range(2, p) if pow(x, q, p) == 1)
            r = 1
            while q * p ** r <= max_order:
                lab = f"C{q}:C{p}^{r}"
                mat = tuple(tuple(s if i == j else 0 for j in range(r)) for i in range(r))
                add(lab, "power-action", lambda r=r, mat=mat, lab=lab:
                    semidirect(q, [p] * r, mat, caps, label=lab), SemidirectSpec(q, (p,) * r, mat))
                r += 1
    if 2 in primes and 3 in primes:
        if max_order >= 12:
            add("A4", "alternating", lambda: semidirect(3, [2, 2], [[0, 1], [1, 1]], caps, label="A4"),
                SemidirectSpec(3, (2, 2), ((0, 1), (1, 1))))
        if max_order >= 24:
            add("S4", "symmetric", lambda: permutation_group(4, ["(0 1)", "(0 1 2 3)"], caps, label="S4"))

    # direct products across primes: nonabelian entry times a coprime abelian group
    nonab = [e for e in out if not e.group.is_abelian]
    ab = [e for e in out if e.group.is_abelian and e.group.order > 1]
    for X in nonab:
        for Y in ab:
            if X.group.order * Y.group.order > max_order or math.gcd(X.group.order, Y.group.order) != 1:
                continue
            lab = f"{X.label} x {Y.label}"
            add(lab, "cross-prime product",
                lambda X=X, Y=Y, lab=lab: direct_product(X.group, Y.group, caps, label=lab),
                ProductSpec((X.group_spec(), Y.group_spec())))
    return out


_PRIORITY = {"abelian": 0, "power-action": 1, "powerful metacyclic": 2,
             "jordan_metabelian truncation": 2, "cross-prime product": 3}


def standard_corpus_entries(max_order: int, primes, caps: Caps = DEFAULT_CAPS,
                            dedupe: bool = True) -> list[CorpusEntry]:
    if max_order < 1:
        raise ValueError("max_order must be positive")
    for p in primes:
        if not is_prime(int(p)):
            raise ValueError(f"{p} is not prime")
    cands = [e for e in _candidates(max_order, primes, caps) if e.group.order <= max_order]
    # named constructions win the isomorphism dedupe
    cands.sort(key=lambda e: (e.group.order, _PRIORITY.get(e.provenance, 1), e.label))
    if not dedupe:
        return cands
    kept: list[CorpusEntry] = []
    buckets: dict[tuple, list[CorpusEntry]] = {}
    for e in cands:
        fp = fingerprint(e.group)
        same = buckets.setdefault(fp, [])
        if any(is_isomorphic(e.group, k.group, caps) for k in same):
            continue
        same.append(e)
        kept.append(e)
    return kept


def standard_corpus(max_order: int, primes, caps: Caps = DEFAULT_CAPS) -> list[FiniteGroup]:
    return [e.group for e in standard_corpus_entries(max_order, primes, caps)]
