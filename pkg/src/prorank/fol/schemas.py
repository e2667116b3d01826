"""Generators for the sentence schemas used to axiomatize rank and dimension.

* :func:`build_gamma`: every commutator is a ``2q``-th power.
* :func:`build_beta1`: ``r`` elements generate modulo the verbal set
  ``{[x1,y1]...[xr,yr] z^q}``; on finite nilpotent π-groups this says ``d <= r``.
* :func:`build_quotient_iso_sentence`: the set defined by ``phi`` is a normal
  subgroup with quotient isomorphic to a given finite group ``B``.
* :func:`build_theta`: disjunction of quotient-isomorphism sentences over a
  caller-supplied list of candidate quotients.
"""

from __future__ import annotations

import itertools
import math

from ..errors import SpecError
from ..group import FiniteGroup, is_prime
from .syntax import (Eq, Formula, Implies, Inv, Mul, Not, One, Pow, Term, Var, all_vars,
                     commutator, conj, disj, exists, forall, fresh_names, free_vars, power,
                     product, rename_bound, substitute)


def q_of(pi) -> int:
    pi = sorted(set(int(p) for p in pi))
    if not pi:
        raise SpecError("prime set must be nonempty")
    for p in pi:
        if not is_prime(p):
            raise SpecError(f"{p} is not prime")
    return math.prod(pi)


def build_gamma(q: int) -> Formula:
    if q < 1:
        raise SpecError("q must be positive")
    x, y, z = Var("x"), Var("y"), Var("z")
    return forall(["x", "y"], exists(["z"], Eq(commutator(x, y), Pow(z, 2 * q))))


def build_beta1(pi, r: int) -> Formula:
    return beta1_for_q(q_of(pi), r)


def beta1_for_q(q: int, r: int) -> Formula:
    if r < 1:
        raise SpecError("r must be positive")
    if q < 1:
        raise SpecError("q must be positive")
    a = [f"a{i}" for i in range(1, r + 1)]
    xs = [f"x{i}" for i in range(1, r + 1)]
    ys = [f"y{i}" for i in range(1, r + 1)]
    tail = [commutator(Var(x), Var(y)) for x, y in zip(xs, ys)] + [power(Var("z"), q)]
    disjuncts = []
    for e in itertools.product(range(q), repeat=r):
        head = [power(Var(ai), ei) for ai, ei in zip(a, e) if ei]
        disjuncts.append(Eq(Var("h"), product(head + tail)))
    inner = [v for pair in zip(xs, ys) for v in pair] + ["z"]
    return exists(a, forall(["h"], exists(inner, disj(disjuncts))))


def _instance(phi: Formula, var: str, t: Term, avoid: set[str]) -> Formula:
    names = fresh_names(avoid | all_vars(phi), "u")
    return substitute(rename_bound(phi, names), {var: t})


def phi_variable(phi: Formula) -> str:
    fv = sorted(free_vars(phi))
    if len(fv) > 1:
        raise SpecError(f"phi must have at most one free variable, has {fv}")
    return fv[0] if fv else "x"


def build_quotient_iso_sentence(B: FiniteGroup, phi: Formula) -> Formula:
    """∃a1..an ∀x,y,z certificate that ``{g | phi(g)}`` is normal with quotient ≅ B.

    Coset representative ``a_i`` stands for the element with index ``i-1`` of B.
    """
    n = B.order
    var = phi_variable(phi)
    a = [f"a{i}" for i in range(1, n + 1)]
    avoid = set(a) | {"x", "y", "z"}

    def P(t: Term) -> Formula:
        return _instance(phi, var, t, avoid)

    x, y = Var("x"), Var("y")
    A = [Var(v) for v in a]
    m = B.table
    parts: list[Formula] = [
        P(One()),
        Implies(conj([P(x), P(y)]), P(Mul(Inv(x), y))),
        Implies(P(x), P(Mul(Mul(Inv(y), x), y))),
    ]
    distinct = [Not(P(Mul(Inv(A[i]), A[j]))) for i in range(n) for j in range(i + 1, n)]
    if distinct:
        parts.append(conj(distinct))
    parts.append(disj([P(Mul(Inv(A[i]), y)) for i in range(n)]))
    parts.append(conj([P(Mul(Mul(Inv(A[int(m[i, j])]), A[i]), A[j]))
                       for i in range(n) for j in range(n)]))
    return exists(a, forall(["x", "y", "z"], conj(parts)))


def build_theta(phi: Formula, candidates: list[FiniteGroup]) -> Formula:
    """The quotient by ``{g | phi(g)}`` is isomorphic to one of ``candidates``."""
    if not candidates:
        raise SpecError("theta needs at least one candidate quotient")
    return disj([build_quotient_iso_sentence(B, phi) for B in candidates])
