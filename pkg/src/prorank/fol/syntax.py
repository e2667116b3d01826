"""Terms and formulas of the first-order language of groups.

Terms use ``1``, products, inverses and integer powers. Commutators are
sugar: ``[x, y]`` stands for ``x^-1 * y^-1 * x * y`` (as ``Mul(Mul(x^-1, y^-1),
Mul(x, y))``) and is re-sugared when printing.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterator, Union


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Inv:
    arg: "Term"


@dataclass(frozen=True)
class Pow:
    base: "Term"
    exp: int

    def __post_init__(self):
        if self.exp == -1:
            raise ValueError("write t^-1 as Inv(t)")


Term = Union[Var, One, Mul, Inv, Pow]


def commutator(a: Term, b: Term) -> Term:
    return Mul(Mul(Inv(a), Inv(b)), Mul(a, b))


def power(t: Term, k: int) -> Term:
    if k == 1:
        return t
    if k == 0:
        return One()
    if k == -1:
        return Inv(t)
    return Pow(t, k)


def product(factors: list[Term]) -> Term:
    """Left-nested product; the empty product is ``1``."""
    if not factors:
        return One()
    out = factors[0]
    for f in factors[1:]:
        out = Mul(out, f)
    return out


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Eq, Not, And, Or, Implies, Exists, Forall]
Quantifier = (Exists, Forall)

TRUE = Eq(One(), One())


def conj(parts: list[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(parts: list[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return Not(TRUE)
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def exists(names, body: Formula) -> Formula:
    for v in reversed(list(names)):
        body = Exists(v, body)
    return body


def forall(names, body: Formula) -> Formula:
    for v in reversed(list(names)):
        body = Forall(v, body)
    return body


# ---------------------------------------------------------------------------
# variables


@functools.lru_cache(maxsize=65536)
def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, One):
        return frozenset()
    if isinstance(t, Mul):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Inv):
        return term_vars(t.arg)
    if isinstance(t, Pow):
        return term_vars(t.base)
    raise TypeError(t)


def free_vars(f) -> set[str]:
    if isinstance(f, (Var, One, Mul, Inv, Pow)):
        return term_vars(f)
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, (And, Or)):
        out: set[str] = set()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, Implies):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Quantifier):
        return free_vars(f.body) - {f.var}
    raise TypeError(f)


def all_vars(f) -> set[str]:
    if isinstance(f, Quantifier):
        return {f.var} | all_vars(f.body)
    if isinstance(f, Not):
        return all_vars(f.arg)
    if isinstance(f, (And, Or)):
        out: set[str] = set()
        for a in f.args:
            out |= all_vars(a)
        return out
    if isinstance(f, Implies):
        return all_vars(f.left) | all_vars(f.right)
    return free_vars(f)


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, Quantifier):
        return 1 + quantifier_depth(f.body)
    if isinstance(f, Not):
        return quantifier_depth(f.arg)
    if isinstance(f, (And, Or)):
        return max((quantifier_depth(a) for a in f.args), default=0)
    if isinstance(f, Implies):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 0


def size(f) -> int:
    """Node count of a term or formula."""
    if isinstance(f, (Var, One)):
        return 1
    if isinstance(f, Mul):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, Inv):
        return 1 + size(f.arg)
    if isinstance(f, Pow):
        return 1 + size(f.base)
    if isinstance(f, Eq):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, Not):
        return 1 + size(f.arg)
    if isinstance(f, (And, Or)):
        return 1 + sum(size(a) for a in f.args)
    if isinstance(f, Implies):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, Quantifier):
        return 1 + size(f.body)
    raise TypeError(f)


def fresh_names(avoid: set[str], prefix: str = "v") -> Iterator[str]:
    for i in itertools.count(1):
        name = f"{prefix}{i}"
        if name not in avoid:
            yield name


# ---------------------------------------------------------------------------
# substitution and alpha-equivalence


def subst_term(t: Term, mapping: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, One):
        return t
    if isinstance(t, Mul):
        return Mul(subst_term(t.left, mapping), subst_term(t.right, mapping))
    if isinstance(t, Inv):
        return Inv(subst_term(t.arg, mapping))
    if isinstance(t, Pow):
        return Pow(subst_term(t.base, mapping), t.exp)
    raise TypeError(t)


def substitute(f: Formula, mapping: dict[str, Term]) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    if isinstance(f, Eq):
        return Eq(subst_term(f.left, mapping), subst_term(f.right, mapping))
    if isinstance(f, Not):
        return Not(substitute(f.arg, mapping))
    if isinstance(f, And):
        return And(tuple(substitute(a, mapping) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(substitute(a, mapping) for a in f.args))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Quantifier):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        incoming: set[str] = set()
        for v in inner.values():
            incoming |= term_vars(v)
        var, body = f.var, f.body
        if var in incoming:
            new = next(fresh_names(incoming | all_vars(body) | set(inner), var + "_"))
            body = substitute(body, {var: Var(new)})
            var = new
        return type(f)(var, substitute(body, inner))
    raise TypeError(f)


def rename_bound(f: Formula, names: Iterator[str]) -> Formula:
    """Rename every bound variable to the next name from ``names``."""
    if isinstance(f, Eq):
        return f
    if isinstance(f, Not):
        return Not(rename_bound(f.arg, names))
    if isinstance(f, And):
        return And(tuple(rename_bound(a, names) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(rename_bound(a, names) for a in f.args))
    if isinstance(f, Implies):
        return Implies(rename_bound(f.left, names), rename_bound(f.right, names))
    if isinstance(f, Quantifier):
        new = next(names)
        body = substitute(f.body, {f.var: Var(new)})
        return type(f)(new, rename_bound(body, names))
    raise TypeError(f)


def _term_alpha(a: Term, b: Term, env_a: dict, env_b: dict) -> bool:
    if isinstance(a, Var) and isinstance(b, Var):
        ia, ib = env_a.get(a.name), env_b.get(b.name)
        if ia is None and ib is None:
            return a.name == b.name
        return ia == ib
    if type(a) is not type(b):
        return False
    if isinstance(a, One):
        return True
    if isinstance(a, Mul):
        return _term_alpha(a.left, b.left, env_a, env_b) and _term_alpha(a.right, b.right, env_a, env_b)
    if isinstance(a, Inv):
        return _term_alpha(a.arg, b.arg, env_a, env_b)
    if isinstance(a, Pow):
        return a.exp == b.exp and _term_alpha(a.base, b.base, env_a, env_b)
    return False


def alpha_equal(f: Formula, g: Formula) -> bool:
    """Structural equality up to renaming of bound variables."""
    return _alpha(f, g, {}, {}, 0)


def _alpha(f, g, env_f, env_g, depth) -> bool:
    if type(f) is not type(g):
        return False
    if isinstance(f, Eq):
        return (_term_alpha(f.left, g.left, env_f, env_g)
                and _term_alpha(f.right, g.right, env_f, env_g))
    if isinstance(f, Not):
        return _alpha(f.arg, g.arg, env_f, env_g, depth)
    if isinstance(f, (And, Or)):
        return len(f.args) == len(g.args) and all(
            _alpha(a, b, env_f, env_g, depth) for a, b in zip(f.args, g.args))
    if isinstance(f, Implies):
        return (_alpha(f.left, g.left, env_f, env_g, depth)
                and _alpha(f.right, g.right, env_f, env_g, depth))
    if isinstance(f, Quantifier):
        return _alpha(f.body, g.body, {**env_f, f.var: depth}, {**env_g, g.var: depth}, depth + 1)
    return False


def match_instance(pattern: Formula, var: str, inst: Formula) -> Term | None | bool:
    """If ``inst`` is ``pattern`` with a term substituted for free ``var``, return that term.

    Returns True when ``var`` does not occur free (any term matches), None
    when ``inst`` is not an instance.
    """
    found: list[Term] = []

    def tmatch(a: Term, b: Term, env_a, env_b) -> bool:
        if isinstance(a, Var) and a.name == var and a.name not in env_a:
            if found:
                return _term_alpha(found[0], b, {}, env_b) and not (term_vars(b) & set(env_b))
            if term_vars(b) & set(env_b):
                return False
            found.append(b)
            return True
        if isinstance(a, Var) and isinstance(b, Var):
            return _term_alpha(a, b, env_a, env_b)
        if type(a) is not type(b):
            return False
        if isinstance(a, One):
            return True
        if isinstance(a, Mul):
            return tmatch(a.left, b.left, env_a, env_b) and tmatch(a.right, b.right, env_a, env_b)
        if isinstance(a, Inv):
            return tmatch(a.arg, b.arg, env_a, env_b)
        if isinstance(a, Pow):
            return a.exp == b.exp and tmatch(a.base, b.base, env_a, env_b)
        return False

    def fmatch(f, g, env_f, env_g, depth) -> bool:
        if type(f) is not type(g):
            return False
        if isinstance(f, Eq):
            return tmatch(f.left, g.left, env_f, env_g) and tmatch(f.right, g.right, env_f, env_g)
        if isinstance(f, Not):
            return fmatch(f.arg, g.arg, env_f, env_g, depth)
        if isinstance(f, (And, Or)):
            return len(f.args) == len(g.args) and all(
                fmatch(a, b, env_f, env_g, depth) for a, b in zip(f.args, g.args))
        if isinstance(f, Implies):
            return fmatch(f.left, g.left, env_f, env_g, depth) and fmatch(f.right, g.right, env_f, env_g, depth)
        if isinstance(f, Quantifier):
            return fmatch(f.body, g.body, {**env_f, f.var: depth}, {**env_g, g.var: depth}, depth + 1)
        return False

    if not fmatch(pattern, inst, {}, {}, 0):
        return None
    return found[0] if found else True


# ---------------------------------------------------------------------------
# printing


def format_term(t: Term, prec: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, One):
        return "1"
    if (isinstance(t, Mul) and isinstance(t.left, Mul) and isinstance(t.right, Mul)
            and isinstance(t.left.left, Inv) and isinstance(t.left.right, Inv)
            and t.left.left.arg == t.right.left and t.left.right.arg == t.right.right):
        return f"[{format_term(t.right.left)}, {format_term(t.right.right)}]"
    if isinstance(t, Mul):
        s = f"{format_term(t.left, 1)}*{format_term(t.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, Inv):
        return f"{format_term(t.arg, 3)}^-1"
    if isinstance(t, Pow):
        return f"{format_term(t.base, 3)}^{t.exp}"
    raise TypeError(t)


_PREC = {Implies: 1, Or: 2, And: 3, Not: 4, Eq: 5}


def format_formula(f: Formula, prec: int = 0) -> str:
    if isinstance(f, Quantifier):
        q = "E" if isinstance(f, Exists) else "A"
        s = f"{q} {f.var} . {format_formula(f.body, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(f, Eq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, Not):
        return "!" + format_formula(f.arg, 4)
    if isinstance(f, And):
        s = " & ".join(format_formula(a, 4) for a in f.args)
    elif isinstance(f, Or):
        s = " | ".join(format_formula(a, 3) for a in f.args)
    elif isinstance(f, Implies):
        s = f"{format_formula(f.left, 2)} -> {format_formula(f.right, 1)}"
    else:
        raise TypeError(f)
    return f"({s})" if prec >= _PREC[type(f)] else s


def pretty(f: Formula) -> str:
    """Human-oriented multi-line rendering of top-level conjunctions."""
    prefix = []
    while isinstance(f, Quantifier):
        prefix.append(("E " if isinstance(f, Exists) else "A ") + f.var + " .")
        f = f.body
    head = " ".join(prefix)
    if isinstance(f, And):
        body = "\n  & ".join(format_formula(a, 4) for a in f.args)
        return f"{head}\n    {body}" if head else body
    return f"{head} {format_formula(f, 0)}".strip()
