"""Set-semantics evaluation for the schema library.

A sentence is accepted only if it is (up to renaming of bound variables)
exactly the output of one of the schema builders, or a conjunction or
disjunction of such sentences. Recognition extracts the parameters and
regenerates the sentence for comparison, so nothing outside the library is
ever given a set-semantics reading.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT_CAPS, Caps
from ..errors import SpecError, UnsupportedSchema
from ..group import FiniteGroup, Subgroup, is_normal, quotient
from ..invariants import is_semi_powerful, verbal_set
from ..isomorphism import is_isomorphic
from ..spec import cyclic
from .naive import NaiveEvaluator
from .schemas import beta1_for_q, build_gamma, build_quotient_iso_sentence
from .syntax import (And, Eq, Exists, Forall, Formula, Implies, Inv, Mul, Or, Pow, Var,
                     alpha_equal, match_instance)


@dataclass(frozen=True)
class Schema:
    kind: str  # gamma | beta1 | quotient-iso | and | or
    params: dict


def _strip(f: Formula, kind) -> tuple[list[str], Formula]:
    names = []
    while isinstance(f, kind):
        names.append(f.var)
        f = f.body
    return names, f


def _rightmost_factor(t):
    while isinstance(t, Mul):
        t = t.right
    return t


def _recognize_gamma(f: Formula) -> Schema | None:
    outer, body = _strip(f, Forall)
    if len(outer) != 2:
        return None
    inner, eq = _strip(body, Exists)
    if len(inner) != 1 or not isinstance(eq, Eq) or not isinstance(eq.right, Pow):
        return None
    k = eq.right.exp
    if k < 2 or k % 2:
        return None
    if alpha_equal(f, build_gamma(k // 2)):
        return Schema("gamma", {"q": k // 2})
    return None


def _recognize_beta1(f: Formula) -> Schema | None:
    a, body = _strip(f, Exists)
    r = len(a)
    if r < 1 or not isinstance(body, Forall):
        return None
    h, body = _strip(body, Forall)
    if len(h) != 1:
        return None
    inner, matrix = _strip(body, Exists)
    if len(inner) != 2 * r + 1:
        return None
    first = matrix.args[0] if isinstance(matrix, Or) else matrix
    if not isinstance(first, Eq):
        return None
    last = _rightmost_factor(first.right)
    if isinstance(last, Pow):
        q = last.exp
    elif isinstance(last, Var):
        q = 1
    else:
        return None
    if q < 1 or q ** r > 1 << 16:
        return None
    if alpha_equal(f, beta1_for_q(q, r)):
        return Schema("beta1", {"q": q, "r": r})
    return None


def _recognize_quotient_iso(f: Formula) -> Schema | None:
    a, body = _strip(f, Exists)
    n = len(a)
    if n < 1:
        return None
    univ, matrix = _strip(body, Forall)
    if len(univ) != 3 or not isinstance(matrix, And) or len(matrix.args) not in (5, 6):
        return None
    xname = univ[0]
    conj_part = matrix.args[2]
    if not isinstance(conj_part, Implies):
        return None
    phi = conj_part.left
    table_part = matrix.args[-1]
    cells = list(table_part.args) if (isinstance(table_part, And) and n > 1) else [table_part]
    if len(cells) != n * n:
        return None
    index = {name: i for i, name in enumerate(a)}
    table = np.zeros((n, n), dtype=np.int64)
    constant_phi = False
    for c, cell in enumerate(cells):
        t = match_instance(phi, xname, cell)
        if t is None:
            return None
        if t is True:
            constant_phi = True
            break
        ok = (isinstance(t, Mul) and isinstance(t.left, Mul) and isinstance(t.left.left, Inv)
              and all(isinstance(v, Var) and v.name in index
                      for v in (t.left.left.arg, t.left.right, t.right)))
        if not ok:
            return None
        i, j = index[t.left.right.name], index[t.right.name]
        if (i, j) != divmod(c, n):
            return None
        table[i, j] = index[t.left.left.arg.name]
    if constant_phi:
        B = cyclic(n, DEFAULT_CAPS.with_(order=max(n, 1)))
    else:
        try:
            B = FiniteGroup.from_table(table, label=f"B{n}")
        except SpecError:
            return None
    # the pattern phi carries the bound names used in the sentence; rename free x back
    if alpha_equal(f, build_quotient_iso_sentence(B, phi)):
        return Schema("quotient-iso", {"B": B, "phi": phi, "var": xname})
    return None


def recognize(f: Formula) -> Schema:
    for rec in (_recognize_gamma, _recognize_beta1, _recognize_quotient_iso):
        s = rec(f)
        if s is not None:
            return s
    if isinstance(f, (And, Or)):
        parts = [recognize(a) for a in f.args]
        return Schema("and" if isinstance(f, And) else "or", {"parts": parts})
    raise UnsupportedSchema("formula is not built from the supported sentence schemas")


# ---------------------------------------------------------------------------
# set semantics


def beta1_holds(G: FiniteGroup, q: int, r: int) -> bool:
    """Some a1..ar with ``{a1^e1 ... ar^er v | v in B(G), 0 <= e < q}`` covering G."""
    n = G.order
    V = np.zeros(n, dtype=bool)
    V[verbal_set(G, r, q)] = True
    if V.all():
        return True
    elements = np.arange(n)
    pw = [G.power(elements, e) for e in range(q)]
    seen: set[tuple[int, bytes]] = set()

    def search(level: int, T: np.ndarray) -> bool:
        # choose a_level, then recurse to level-1; level counts remaining choices
        members = np.flatnonzero(T)
        for g in range(n):
            U = np.zeros(n, dtype=bool)
            for e in range(q):
                U[np.asarray(G.mul(int(pw[e][g]), members))] = True
            if level == 1:
                if U.all():
                    return True
                continue
            if int(U.sum()) * q ** (level - 1) < n:
                continue
            key = (level - 1, np.packbits(U).tobytes())
            if key in seen:
                continue
            seen.add(key)
            if search(level - 1, U):
                return True
        return False

    return search(r, V)


def quotient_iso_holds(G: FiniteGroup, B: FiniteGroup, phi: Formula, var: str,
                       caps: Caps = DEFAULT_CAPS) -> bool:
    ev = NaiveEvaluator(G, caps)
    mask = np.array([ev.evaluate(phi, {var: g}) for g in range(G.order)], dtype=bool)
    if not mask[0]:
        return False
    N = np.flatnonzero(mask)
    if not mask[np.asarray(G.mul(G.inverse[N][:, None], N[None, :]))].all():
        return False
    sub = Subgroup(G, N, _trusted=True)
    if not is_normal(G, sub):
        return False
    if G.order != B.order * sub.order:
        return False
    Q, _ = quotient(G, sub, check=False)
    return is_isomorphic(Q, B, caps)


def evaluate_schema(G: FiniteGroup, s: Schema, caps: Caps = DEFAULT_CAPS) -> bool:
    if s.kind == "gamma":
        return is_semi_powerful(G, s.params["q"])
    if s.kind == "beta1":
        return beta1_holds(G, s.params["q"], s.params["r"])
    if s.kind == "quotient-iso":
        return quotient_iso_holds(G, s.params["B"], s.params["phi"], s.params["var"], caps)
    if s.kind == "and":
        return all(evaluate_schema(G, p, caps) for p in s.params["parts"])
    if s.kind == "or":
        return any(evaluate_schema(G, p, caps) for p in s.params["parts"])
    raise UnsupportedSchema(s.kind)


def eval_fast(G: FiniteGroup, f: Formula, caps: Caps = DEFAULT_CAPS) -> bool:
    return evaluate_schema(G, recognize(f), caps)
