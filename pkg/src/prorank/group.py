"""Finite groups on element indices ``0..n-1`` with the identity pinned at 0.

A :class:`FiniteGroup` multiplies through a *law*. Small groups carry a dense
Cayley table; large structured groups (direct products of cyclic groups,
cyclic-by-abelian semidirect products) multiply arithmetically on mixed-radix
element codes so that tower levels with millions of elements stay usable.
All multiplication is vectorized over numpy index arrays.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import NotNormalError, SpecError, Undecided


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def p_part(n: int, p: int) -> int:
    return p ** factorize(n).get(p, 0)


def _as_index(a) -> np.ndarray:
    return np.asarray(a, dtype=np.int64)


# ---------------------------------------------------------------------------
# laws


class TableLaw:
    def __init__(self, table: np.ndarray):
        self.table = table

    def mul(self, a, b):
        return self.table[a, b]


class CyclicLaw:
    def __init__(self, n: int):
        self.n = n

    def mul(self, a, b):
        return (_as_index(a) + _as_index(b)) % self.n

    def inverse(self, a):
        return (-_as_index(a)) % self.n


class AbelianLaw:
    """Direct sum of cyclic groups ``Z/m_0 + ... + Z/m_k`` in mixed radix."""

    def __init__(self, moduli: Sequence[int]):
        self.moduli = tuple(int(m) for m in moduli)
        self.strides = _strides(self.moduli)

    def decode(self, a):
        a = _as_index(a)
        return [(a // s) % m for s, m in zip(self.strides, self.moduli)]

    def encode(self, parts):
        out = 0
        for v, s in zip(parts, self.strides):
            out = out + v * s
        return out

    def mul(self, a, b):
        pa, pb = self.decode(a), self.decode(b)
        return self.encode([(x + y) % m for x, y, m in zip(pa, pb, self.moduli)])

    def inverse(self, a):
        return self.encode([(-x) % m for x, m in zip(self.decode(a), self.moduli)])


class ProductLaw:
    def __init__(self, left: "FiniteGroup", right: "FiniteGroup"):
        self.left = left
        self.right = right

    def mul(self, a, b):
        a, b = _as_index(a), _as_index(b)
        nr = self.right.order
        return (_as_index(self.left.mul(a // nr, b // nr)) * nr
                + _as_index(self.right.mul(a % nr, b % nr)))

    def inverse(self, a):
        a = _as_index(a)
        nr = self.right.order
        return (_as_index(self.left.inverse[a // nr]) * nr
                + _as_index(self.right.inverse[a % nr]))


class SemidirectLaw:
    """``C_m ⋉ A`` with ``A`` abelian (invariant factors ``moduli``).

    Element ``e * |A| + code(v)`` stands for ``c^e v``. Conjugation
    ``v^c = c^-1 v c`` is the matrix action, so
    ``(c^e1 v1)(c^e2 v2) = c^(e1+e2) (M^e2 v1 + v2)``.
    """

    def __init__(self, m: int, moduli: Sequence[int], powers: np.ndarray):
        self.m = int(m)
        self.base = AbelianLaw(moduli)
        self.size = math.prod(self.base.moduli)
        self.powers = powers  # shape (m, k, k): M^e, row i reduced mod moduli[i]

    def _act(self, e, v):
        k = len(self.base.moduli)
        out = []
        for i in range(k):
            acc = 0
            for j in range(k):
                acc = acc + self.powers[:, i, j][e] * v[j]
            out.append(acc % self.base.moduli[i])
        return out

    def mul(self, a, b):
        a, b = _as_index(a), _as_index(b)
        a, b = np.broadcast_arrays(a, b)
        e1, r1 = a // self.size, a % self.size
        e2, r2 = b // self.size, b % self.size
        v1, v2 = self.base.decode(r1), self.base.decode(r2)
        w = self._act(e2, v1)
        w = [(x + y) % m for x, y, m in zip(w, v2, self.base.moduli)]
        return ((e1 + e2) % self.m) * self.size + self.base.encode(w)

    def inverse(self, a):
        a = _as_index(a)
        e, r = a // self.size, a % self.size
        e_inv = (-e) % self.m
        w = self._act(e_inv, self.base.decode(r))
        w = [(-x) % m for x, m in zip(w, self.base.moduli)]
        return e_inv * self.size + self.base.encode(w)


def _strides(moduli: Sequence[int]) -> tuple[int, ...]:
    out = []
    s = 1
    for m in reversed(moduli):
        out.append(s)
        s *= m
    return tuple(reversed(out))


# ---------------------------------------------------------------------------
# groups


class FiniteGroup:
    """Exact finite group on indices ``0..order-1``; identity is index 0."""

    identity = 0

    def __init__(self, order: int, law, label: str = "", gens: Sequence[int] | None = None,
                 table_limit: int = DEFAULT_CAPS.table):
        if order < 1:
            raise SpecError("group order must be positive")
        self.order = int(order)
        self.law = law
        self.label = label
        self._gens = None if gens is None else tuple(int(g) for g in gens)
        self.table_limit = table_limit

    def __repr__(self):
        return f"FiniteGroup({self.label or '?'}, order={self.order})"

    def __len__(self):
        return self.order

    @classmethod
    def from_table(cls, table, label: str = "", validate: bool = True) -> "FiniteGroup":
        table = np.asarray(table)
        n = table.shape[0]
        if table.shape != (n, n):
            raise SpecError("Cayley table must be square")
        if table.size and (table.min() < 0 or table.max() >= n):
            raise SpecError("Cayley table entries out of range")
        table = table.astype(_table_dtype(n))
        table.setflags(write=False)
        G = cls(n, TableLaw(table), label=label)
        G.__dict__["table"] = table
        if validate:
            G.validate()
        return G

    @cached_property
    def table(self) -> np.ndarray:
        law = self.law
        if isinstance(law, TableLaw):
            return law.table
        n = self.order
        if n > max(self.table_limit, 1):
            raise Undecided("table", self.table_limit, f"order {n}")
        out = np.empty((n, n), dtype=_table_dtype(n))
        a = np.arange(n)
        step = max(1, 2_000_000 // n)
        for lo in range(0, n, step):
            out[lo:lo + step] = law.mul(a[lo:lo + step, None], a[None, :])
        out.setflags(write=False)
        return out

    @property
    def has_table(self) -> bool:
        return isinstance(self.law, TableLaw) or self.order <= self.table_limit

    def mul(self, a, b):
        if self.has_table:
            return self.table[a, b]
        return self.law.mul(a, b)

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.order)

    @cached_property
    def inverse(self) -> np.ndarray:
        law = self.law
        if hasattr(law, "inverse"):
            inv = _as_index(law.inverse(np.arange(self.order)))
        else:
            inv = np.argmax(self.table == 0, axis=1).astype(np.int64)
        inv.setflags(write=False)
        return inv

    def power(self, x, k: int):
        x = _as_index(x)
        if k < 0:
            x = self.inverse[x]
            k = -k
        result = np.zeros_like(x)
        base = x
        while k:
            if k & 1:
                result = _as_index(self.mul(result, base))
            k >>= 1
            if k:
                base = _as_index(self.mul(base, base))
        return result

    def commutator(self, x, y):
        """``[x, y] = x^-1 y^-1 x y``."""
        inv = self.inverse
        return self.mul(self.mul(inv[x], inv[y]), self.mul(x, y))

    def conjugate(self, x, g):
        """``x^g = g^-1 x g``."""
        return self.mul(self.mul(self.inverse[g], x), g)

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        todo = np.arange(1, n)
        cur = todo.copy()
        k = 1
        while todo.size:
            k += 1
            cur = _as_index(self.mul(cur, todo))
            hit = cur == 0
            orders[todo[hit]] = k
            todo, cur = todo[~hit], cur[~hit]
        orders.setflags(write=False)
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(np.unique(self.element_orders)))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        if self._gens is not None:
            return tuple(g for g in self._gens if g != 0)
        return greedy_generators(self, np.arange(self.order))

    @cached_property
    def is_abelian(self) -> bool:
        g = np.asarray(self.generators, dtype=np.int64)
        if g.size == 0:
            return True
        return bool(np.array_equal(self.mul(g[:, None], g[None, :]),
                                   self.mul(g[None, :], g[:, None])))

    @cached_property
    def primes(self) -> list[int]:
        return prime_divisors(self.order)

    @cached_property
    def is_nilpotent(self) -> bool:
        return _is_nilpotent(self, np.arange(self.order))

    @cached_property
    def p_group_prime(self) -> int | None:
        ps = self.primes
        return ps[0] if len(ps) == 1 else None

    def is_p_group(self, p: int | None = None) -> bool:
        if self.order == 1:
            return True
        q = self.p_group_prime
        return q is not None and (p is None or q == p)

    def validate(self) -> None:
        """Check identity, inverses and associativity (Light's test on generators)."""
        n = self.order
        T = self.table
        a = np.arange(n)
        if not (np.array_equal(T[0], a) and np.array_equal(T[:, 0], a)):
            raise SpecError("index 0 is not a two-sided identity")
        for row in (T, T.T):
            srt = np.sort(row, axis=1)
            if not np.array_equal(srt, np.broadcast_to(a, (n, n))):
                raise SpecError("Cayley table is not a Latin square")
        inv = self.inverse
        if not (np.all(T[a, inv] == 0) and np.all(T[inv, a] == 0)):
            raise SpecError("inverses do not exist")
        # Light: (x s) y == x (s y) for s in a generating set implies associativity
        for s in _magma_generators(T):
            left = T[T[:, s][:, None], a[None, :]]
            right = T[a[:, None], T[s, :][None, :]]
            if not np.array_equal(left, right):
                raise SpecError("operation is not associative")

    def subgroup(self, elements, gens=None) -> "Subgroup":
        return Subgroup(self, elements, gens)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order), gens=self.generators, _trusted=True)

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, [0], gens=(), _trusted=True)


def _table_dtype(n: int):
    return np.int16 if n <= 32767 else np.int32


def _magma_generators(T: np.ndarray) -> list[int]:
    """Greedy set generating the whole table under the binary operation."""
    n = T.shape[0]
    mask = np.zeros(n, dtype=bool)
    members = np.zeros(0, dtype=np.int64)
    gens: list[int] = []
    for x in range(n):
        if mask[x]:
            continue
        gens.append(x)
        mask[x] = True
        fresh = np.array([x], dtype=np.int64)
        while fresh.size:
            members = np.concatenate([members, fresh])
            prod = np.concatenate([T[fresh[:, None], members[None, :]].ravel(),
                                   T[members[:, None], fresh[None, :]].ravel()])
            fresh = np.unique(prod[~mask[prod]]).astype(np.int64)
            mask[fresh] = True
    return gens


# ---------------------------------------------------------------------------
# closure


def close(G: FiniteGroup, gens, mask: np.ndarray | None = None, new=None) -> np.ndarray:
    """Mask of the subgroup generated by ``gens``.

    With ``mask`` given (closed under ``gens``), extend it by the extra
    generators ``new``.
    """
    gens = [int(g) for g in gens]
    if mask is None:
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        all_gens = np.asarray(gens + [int(x) for x in (new or [])], dtype=np.int64)
    else:
        mask = mask.copy()
        new = np.asarray([int(x) for x in (new or [])], dtype=np.int64)
        if new.size == 0:
            return mask
        elems = np.flatnonzero(mask)
        prod = _as_index(G.mul(elems[:, None], new[None, :])).ravel()
        frontier = np.unique(prod[~mask[prod]])
        mask[frontier] = True
        all_gens = np.concatenate([np.asarray(gens, dtype=np.int64), new])
    if all_gens.size == 0:
        return mask
    while frontier.size:
        prod = _as_index(G.mul(frontier[:, None], all_gens[None, :])).ravel()
        prod = prod[~mask[prod]]
        if prod.size == 0:
            break
        frontier = np.unique(prod)
        mask[frontier] = True
    return mask


def greedy_generators(G: FiniteGroup, elems: np.ndarray) -> tuple[int, ...]:
    """A (not necessarily minimal) generating set for the subgroup ``elems``.

    Candidates are tried by decreasing element order, then index.
    """
    elems = _as_index(elems)
    target = elems.size
    orders = G.element_orders[elems]
    order_idx = np.lexsort((elems, -orders))
    cand = elems[order_idx]
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    gens: list[int] = []
    count = 1
    for x in cand:
        if count == target:
            break
        if mask[x]:
            continue
        mask = close(G, gens, mask, [x])
        gens.append(int(x))
        count = int(mask.sum())
    return tuple(gens)


def generated_by_set(G: FiniteGroup, S, gens=(), mask=None) -> tuple[np.ndarray, tuple[int, ...]]:
    """Close an arbitrary element set, adding elements of ``S`` greedily as generators."""
    if mask is None:
        mask = close(G, gens)
    gens = list(gens)
    rest = np.unique(_as_index(S))
    while True:
        rest = rest[~mask[rest]]
        if rest.size == 0:
            break
        x = int(rest[0])
        mask = close(G, gens, mask, [x])
        gens.append(x)
    return mask, tuple(gens)


class Subgroup:
    """Element-index subset of a parent group, closed under its operation."""

    __slots__ = ("parent", "elements", "_gens", "_mask", "_key")

    def __init__(self, parent: FiniteGroup, elements, gens=None, _trusted: bool = False):
        el = np.unique(_as_index(elements))
        if not _trusted:
            if el.size == 0 or el[0] != 0:
                raise SpecError("subgroup must contain the identity")
            if el[-1] >= parent.order:
                raise SpecError("subgroup element out of range")
        el.setflags(write=False)
        self.parent = parent
        self.elements = el
        self._gens = None if gens is None else tuple(int(g) for g in gens)
        self._mask = None
        self._key = None
        if not _trusted:
            self._check_closed()

    @classmethod
    def from_mask(cls, parent, mask, gens=None) -> "Subgroup":
        sub = cls(parent, np.flatnonzero(mask), gens, _trusted=True)
        sub._mask = mask
        return sub

    def _check_closed(self):
        G = self.parent
        g = np.asarray(self.generators, dtype=np.int64)
        if g.size:
            prod = _as_index(G.mul(self.elements[:, None], g[None, :]))
            if not self.mask[prod].all():
                raise SpecError("element set is not closed under the group operation")
        if self.parent.order % self.order:
            raise SpecError("subgroup order does not divide group order")

    @property
    def order(self) -> int:
        return int(self.elements.size)

    def __len__(self):
        return self.order

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.parent.order, dtype=bool)
            m[self.elements] = True
            m.setflags(write=False)
            self._mask = m
        return self._mask

    def release(self) -> None:
        """Drop the cached membership mask (large parents)."""
        if self.parent.order > 4096:
            self._mask = None

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = np.packbits(self.mask).tobytes()
        return self._key

    @property
    def generators(self) -> tuple[int, ...]:
        if self._gens is None:
            self._gens = greedy_generators(self.parent, self.elements)
        return tuple(g for g in self._gens if g != 0)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and np.array_equal(other.elements, self.elements))

    def __hash__(self):
        return hash(self.key)

    def __le__(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.elements].all())

    def __repr__(self):
        return f"Subgroup(order={self.order}, parent={self.parent.label or '?'})"

    def sort_key(self):
        return (self.order, tuple(self.elements.tolist()))

    def as_group(self, label: str = "") -> tuple[FiniteGroup, np.ndarray]:
        """Re-index as a standalone group; returns (group, embedding array)."""
        el = self.elements
        pos = np.full(self.parent.order, -1, dtype=np.int64)
        pos[el] = np.arange(el.size)
        table = pos[_as_index(self.parent.mul(el[:, None], el[None, :]))]
        H = FiniteGroup.from_table(table, label=label or f"subgroup of {self.parent.label}",
                                   validate=False)
        return H, el


# ---------------------------------------------------------------------------
# homomorphisms


class Homomorphism:
    def __init__(self, source: FiniteGroup, target: FiniteGroup, mapping):
        m = _as_index(mapping)
        if m.shape != (source.order,):
            raise SpecError("homomorphism map has wrong length")
        m.setflags(write=False)
        self.source = source
        self.target = target
        self.map = m

    def __call__(self, x):
        return self.map[x]

    def is_homomorphism(self) -> bool:
        """Check ``f(xs) = f(x) f(s)`` for all x and generators s, plus ``f(1) = 1``."""
        S, T = self.source, self.target
        if self.map[0] != 0:
            return False
        x = np.arange(S.order)
        for s in S.generators:
            lhs = self.map[_as_index(S.mul(x, s))]
            rhs = _as_index(T.mul(self.map, self.map[s]))
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_surjective(self) -> bool:
        return np.unique(self.map).size == self.target.order

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, np.flatnonzero(self.map == 0), _trusted=True)

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """``other ∘ self``."""
        return Homomorphism(self.source, other.target, other.map[self.map])


# ---------------------------------------------------------------------------
# subgroup operations


def subgroup_generated(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    S = [int(s) for s in S]
    for s in S:
        if not 0 <= s < G.order:
            raise SpecError(f"element {s} out of range")
    mask, gens = generated_by_set(G, S)
    return Subgroup.from_mask(G, mask, gens)


def is_normal(G: FiniteGroup, N: Subgroup, within: Subgroup | None = None) -> bool:
    conj_by = G.generators if within is None else within.generators
    n = np.asarray(N.generators, dtype=np.int64)
    if n.size == 0:
        return True
    for g in conj_by:
        if not N.mask[_as_index(G.conjugate(n, g))].all():
            return False
    return True


def normal_closure(G: FiniteGroup, S, within: Subgroup | None = None) -> Subgroup:
    """Smallest subgroup of ``within`` (default G) normal in it and containing S."""
    conj_by = np.asarray(G.generators if within is None else within.generators, dtype=np.int64)
    mask, gens = generated_by_set(G, S)
    while True:
        g = np.asarray(gens, dtype=np.int64)
        if g.size == 0 or conj_by.size == 0:
            break
        conj = _as_index(G.conjugate(g[:, None], conj_by[None, :])).ravel()
        fresh = np.unique(conj[~mask[conj]])
        if fresh.size == 0:
            break
        mask, gens = generated_by_set(G, fresh, gens, mask)
    return Subgroup.from_mask(G, mask, gens)


def commutator_subgroup(G: FiniteGroup, H: Subgroup | None = None) -> Subgroup:
    """Derived subgroup ``[H, H]`` (H defaults to G)."""
    gens = np.asarray(G.generators if H is None else H.generators, dtype=np.int64)
    if gens.size == 0:
        return G.trivial
    comms = _as_index(G.commutator(gens[:, None], gens[None, :])).ravel()
    return normal_closure(G, comms, within=H)


def power_subgroup(G: FiniteGroup, k: int, H: Subgroup | None = None) -> Subgroup:
    """``H^k``: the subgroup generated by all k-th powers of elements of H."""
    elems = G.elements if H is None else H.elements
    pw = G.power(elems, k)
    mask, gens = generated_by_set(G, pw)
    return Subgroup.from_mask(G, mask, gens)


def product_of_normal(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    mask, gens = generated_by_set(G, B.generators, A.generators, A.mask.copy())
    return Subgroup.from_mask(G, mask, gens)


def centralizer(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    x = G.elements
    mask = np.ones(G.order, dtype=bool)
    for s in S:
        s = int(s)
        mask &= _as_index(G.mul(x, s)) == _as_index(G.mul(s, x))
    return Subgroup.from_mask(G, mask)


def center(G: FiniteGroup) -> Subgroup:
    return centralizer(G, G.generators)


def normalizer_mask(G: FiniteGroup, H: Subgroup, within: np.ndarray | None = None) -> np.ndarray:
    """Boolean array over ``within`` (default all of G): does g normalize H?"""
    g = G.elements if within is None else _as_index(within)
    ok = np.ones(g.size, dtype=bool)
    inv = G.inverse[g]
    for h in H.generators:
        ok &= H.mask[_as_index(G.mul(G.mul(inv, h), g))]
    return ok


def _is_nilpotent(G: FiniteGroup, elems: np.ndarray) -> bool:
    n = elems.size
    if n == 1:
        return True
    orders = G.element_orders[elems]
    for p, e in factorize(n).items():
        # elements of p-power order
        o = orders.copy()
        while True:
            div = o % p == 0
            if not div.any():
                break
            o[div] //= p
        if int((o == 1).sum()) != p ** e:
            return False
    return True


def is_nilpotent(G: FiniteGroup, H: Subgroup | None = None) -> bool:
    return G.is_nilpotent if H is None else _is_nilpotent(G, H.elements)


def p_elements(G: FiniteGroup, p: int, elems=None) -> np.ndarray:
    elems = G.elements if elems is None else _as_index(elems)
    o = G.element_orders[elems].copy()
    while True:
        div = o % p == 0
        if not div.any():
            break
        o[div] //= p
    return elems[o == 1]


# ---------------------------------------------------------------------------
# constructions


def direct_product(G: FiniteGroup, H: FiniteGroup, caps: Caps = DEFAULT_CAPS,
                   label: str | None = None, cap: int | None = None) -> FiniteGroup:
    n = G.order * H.order
    limit = caps.order if cap is None else cap
    if n > limit:
        raise Undecided("order", limit, f"direct product of order {n}")
    nr = H.order
    gens = [g * nr for g in G.generators] + [h for h in H.generators]
    return FiniteGroup(n, ProductLaw(G, H), label=label or f"({G.label} x {H.label})",
                       gens=gens, table_limit=caps.table)


def quotient(G: FiniteGroup, N: Subgroup, label: str | None = None,
             check: bool = True) -> tuple[FiniteGroup, Homomorphism]:
    """Coset group G/N with projection; coset representatives are minimal indices."""
    if N.parent is not G:
        raise SpecError("subgroup belongs to a different group")
    if check and not is_normal(G, N):
        raise NotNormalError("subgroup is not normal")
    if N.order == 1:
        return G, Homomorphism(G, G, np.arange(G.order))
    n = G.order
    label_of = np.full(n, -1, dtype=np.int64)
    reps: list[int] = []
    Nel = N.elements
    nxt = 0
    while True:
        free = np.flatnonzero(label_of[nxt:] < 0)
        if free.size == 0:
            break
        g = nxt + int(free[0])
        label_of[_as_index(G.mul(g, Nel))] = len(reps)
        reps.append(g)
        nxt = g + 1
    r = np.asarray(reps, dtype=np.int64)
    table = label_of[_as_index(G.mul(r[:, None], r[None, :]))]
    Q = FiniteGroup.from_table(table, label=label or f"{G.label}/N{N.order}", validate=False)
    return Q, Homomorphism(G, Q, label_of)


def cyclic_subgroups(G: FiniteGroup, elems=None) -> list[Subgroup]:
    """Distinct cyclic subgroups, ordered by (order, element tuple)."""
    elems = G.elements if elems is None else _as_index(elems)
    seen: dict[bytes, Subgroup] = {}
    covered = np.zeros(G.order, dtype=bool)
    orders = G.element_orders
    for x in elems[np.lexsort((elems, orders[elems]))]:
        if covered[x]:
            continue
        k = int(orders[x])
        pw = [0]
        cur = 0
        for _ in range(k - 1):
            cur = int(G.mul(cur, x))
            pw.append(cur)
        m = np.zeros(G.order, dtype=bool)
        m[pw] = True
        # generators of this cyclic group are the powers coprime to k
        gens = [pw[i] for i in range(1, k) if math.gcd(i, k) == 1] if k > 1 else []
        covered[gens] = True
        covered[0] = True
        S = Subgroup.from_mask(G, m, gens=(int(x),) if k > 1 else ())
        seen.setdefault(S.key, S)
    return sorted(seen.values(), key=Subgroup.sort_key)


def hom_from_generators(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int],
                        images: Sequence[int]) -> Homomorphism:
    """Extend ``gens[i] -> images[i]`` to a homomorphism, verifying consistency.

    ``gens`` must generate G. Raises SpecError if the assignment does not
    extend (some relation of G fails in H).
    """
    n = G.order
    fmap = np.full(n, -1, dtype=np.int64)
    fmap[0] = 0
    g = np.asarray(list(gens), dtype=np.int64)
    h = np.asarray(list(images), dtype=np.int64)
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        y = _as_index(G.mul(frontier[:, None], g[None, :])).ravel()
        fy = _as_index(H.mul(fmap[frontier][:, None], h[None, :])).ravel()
        known = fmap[y] >= 0
        if np.any(fmap[y[known]] != fy[known]):
            raise SpecError("generator images do not define a homomorphism")
        y_new, fy_new = y[~known], fy[~known]
        if y_new.size == 0:
            break
        order = np.argsort(y_new, kind="stable")
        y_new, fy_new = y_new[order], fy_new[order]
        first = np.ones(y_new.size, dtype=bool)
        first[1:] = y_new[1:] != y_new[:-1]
        # every assignment to the same new element must agree
        grp = np.cumsum(first) - 1
        if np.any(fy_new != fy_new[first][grp]):
            raise SpecError("generator images do not define a homomorphism")
        frontier = y_new[first]
        fmap[frontier] = fy_new[first]
    if np.any(fmap < 0):
        raise SpecError("elements given do not generate the source group")
    return Homomorphism(G, H, fmap)
