"""Jordan-block tower levels handled as lattices over ``Z/p^k``.

A level ``C_{p^m} ⋉ (Z/p^k)^n`` stops being enumerable after a few layers,
but every subgroup met along its Frattini series has the split form
``<c^(p^s)> ⋉ L`` with ``L`` a J-invariant lattice. Orders, Frattini
subgroups, generator numbers and the rank certificate then reduce to local
Smith-form elimination on integer matrices.

Only odd p is handled (Jordan families need ``p > n >= 2`` anyway), which
keeps the power subgroup in the powerful test equal to ``H^p``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SpecError
from .towers import JordanMetabelian, jordan_order_exponent

Matrix = tuple[tuple[int, ...], ...]


def _valuation(x: int, p: int, k: int) -> int:
    x %= p ** k
    if x == 0:
        return k
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def log_span_order(rows, p: int, k: int, n: int) -> int:
    """``log_p`` of the order of the subgroup of ``(Z/p^k)^n`` spanned by ``rows``."""
    mod = p ** k
    M = [[int(x) % mod for x in r] for r in rows if any(int(x) % mod for x in r)]
    total = 0
    t = 0
    ncols = n
    while M and t < ncols:
        best = None
        for i, row in enumerate(M):
            for j in range(t, ncols):
                v = _valuation(row[j], p, k)
                if v < k and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, i, j = best
        M[0], M[i] = M[i], M[0]
        for row in M:
            row[t], row[j] = row[j], row[t]
        piv = M[0][t]
        unit_inv = pow(piv // p ** v, -1, mod)
        head = M[0]
        rest = []
        for row in M[1:]:
            if row[t]:
                f = (row[t] // p ** v) * unit_inv % mod
                row = [(a - f * b) % mod for a, b in zip(row, head)]
            if any(row):
                rest.append(row)
        # column elimination only changes coordinates; the pivot row then spans a p^v-cyclic factor
        total += k - v
        M = [r[:t] + [0] + r[t + 1:] for r in rest]
        t += 1
    return total


def echelon_rows(rows, p: int, k: int, n: int) -> tuple[tuple[int, ...], ...]:
    """At most n rows spanning the same subgroup of ``(Z/p^k)^n``.

    Column by column, a row of least valuation clears that column from the
    others; the operations are invertible, so the span is unchanged.
    """
    mod = p ** k
    M = [[int(x) % mod for x in r] for r in rows]
    M = [r for r in M if any(r)]
    out = []
    for t in range(n):
        live = [(_valuation(r[t], p, k), i) for i, r in enumerate(M) if r[t]]
        if not live:
            continue
        v, i = min(live)
        head = M.pop(i)
        unit_inv = pow(head[t] // p ** v, -1, mod)
        rest = []
        for r in M:
            if r[t]:
                f = (r[t] // p ** v) * unit_inv % mod
                r = [(a - f * b) % mod for a, b in zip(r, head)]
            if any(r):
                rest.append(r)
        M = rest
        out.append(tuple(head))
    return tuple(out)


def _matmul(A: Matrix, B: Matrix, mod: int) -> Matrix:
    n = len(A)
    return tuple(tuple(sum(A[i][l] * B[l][j] for l in range(n)) % mod for j in range(n))
                 for i in range(n))


def _matpow(A: Matrix, e: int, mod: int) -> Matrix:
    n = len(A)
    R = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    while e:
        if e & 1:
            R = _matmul(R, A, mod)
        A = _matmul(A, A, mod)
        e >>= 1
    return R


@dataclass(frozen=True)
class Lattice:
    """Subgroup of ``(Z/p^k)^n`` given by spanning rows (column-vector action ``v -> M v``)."""
    p: int
    k: int
    n: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def log_order(self) -> int:
        return log_span_order(self.rows, self.p, self.k, self.n)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice(self.p, self.k, self.n, echelon_rows(self.rows + other.rows, self.p, self.k, self.n))

    def scaled(self, c: int) -> "Lattice":
        mod = self.p ** self.k
        return Lattice(self.p, self.k, self.n, tuple(tuple(c * x % mod for x in r) for r in self.rows))

    def image(self, M: Matrix) -> "Lattice":
        mod = self.p ** self.k
        rows = tuple(tuple(sum(M[i][j] * r[j] for j in range(self.n)) % mod for i in range(self.n))
                     for r in self.rows)
        return Lattice(self.p, self.k, self.n, rows)

    def contains(self, other: "Lattice") -> bool:
        return (self + other).log_order == self.log_order

    @property
    def is_zero(self) -> bool:
        return self.log_order == 0


@dataclass(frozen=True)
class SplitSubgroup:
    """``<c^(p^s)> ⋉ L`` inside a Jordan level."""
    level: "JordanLevelModel"
    s: int
    L: Lattice

    @property
    def log_order(self) -> int:
        return max(self.level.m - self.s, 0) + self.L.log_order

    @property
    def action(self) -> Matrix:
        return self.level.action(self.s)

    def commutator_lattice(self) -> Lattice:
        # [c^(p^s), l] = (J' - I) l; all commutators of H lie in (J' - I) L
        return self.L.image(self.level.minus_identity(self.action))

    def power_lattice(self) -> Lattice:
        """A-part of ``H^p``: ``pL`` plus ``N_a L`` for ``(g^a l)^p = g^(ap) N_a(l)``."""
        lv = self.level
        out = self.L.scaled(lv.p)
        g_order = lv.p ** max(lv.m - self.s, 0)
        seen = set()
        for a in range(1, g_order):
            Ja = _matpow(self.action, a, lv.mod)
            if Ja in seen:
                continue
            seen.add(Ja)
            N = lv.zero_matrix()
            P = lv.identity()
            for _ in range(lv.p):
                N = tuple(tuple((x + y) % lv.mod for x, y in zip(r1, r2)) for r1, r2 in zip(N, P))
                P = _matmul(P, Ja, lv.mod)
            out = out + self.L.image(N)
        return out

    def frattini(self) -> "SplitSubgroup":
        """``Φ(H) = H^p [H,H] = <c^(p^(s+1))> ⋉ (pL + (J' - I) L)``."""
        s = min(self.s + 1, self.level.m)
        return SplitSubgroup(self.level, s, self.L.scaled(self.level.p) + self.commutator_lattice())

    def d(self) -> int:
        return self.log_order - self.frattini().log_order

    def is_powerful(self) -> bool:
        return (self.power_lattice()).contains(self.commutator_lattice())

    @property
    def is_trivial(self) -> bool:
        return self.log_order == 0


class JordanLevelModel:
    """Level ``depth`` of ``jordan_metabelian(p, n)`` as a lattice model."""

    def __init__(self, fam: JordanMetabelian, depth: int):
        if fam.p == 2 or fam.n < 1 or fam.p <= fam.n:
            raise SpecError("lattice model needs an odd prime p > n >= 1")
        if depth < 1:
            raise SpecError("depth must be positive")
        self.family = fam
        self.p, self.n, self.depth = fam.p, fam.n, depth
        self.mod = fam.p ** depth
        self.m = jordan_order_exponent(fam.p, fam.n, depth)
        n = fam.n
        self.J: Matrix = tuple(tuple(int(i == j or i == j + 1) for j in range(n)) for i in range(n))
        self.A = Lattice(self.p, depth, n, self.identity())

    def identity(self) -> Matrix:
        return tuple(tuple(int(i == j) for j in range(self.n)) for i in range(self.n))

    def zero_matrix(self) -> Matrix:
        return tuple(tuple(0 for _ in range(self.n)) for _ in range(self.n))

    def action(self, s: int) -> Matrix:
        return _matpow(self.J, self.p ** s, self.mod)

    def minus_identity(self, M: Matrix) -> Matrix:
        return tuple(tuple((M[i][j] - int(i == j)) % self.mod for j in range(self.n)) for i in range(self.n))

    @property
    def log_order(self) -> int:
        return self.m + self.depth * self.n

    @property
    def G(self) -> SplitSubgroup:
        return SplitSubgroup(self, 0, self.A)

    @property
    def F(self) -> SplitSubgroup:
        return SplitSubgroup(self, min(1, self.m), self.A)

    def frattini_series(self, H: SplitSubgroup, j: int) -> list[SplitSubgroup]:
        out = [H]
        for _ in range(j):
            out.append(out[-1].frattini())
        return out

    def rank_bounds(self) -> tuple[int, int]:
        """``max(d(G), d(F)) <= rank <= rank(A) + rank(G/A) = n + [m > 0]``."""
        upper = self.n + (1 if self.m > 0 else 0)
        lower = max(self.G.d(), self.F.d())
        return lower, upper

    def rank(self) -> int | None:
        lo, hi = self.rank_bounds()
        return hi if lo == hi else None
