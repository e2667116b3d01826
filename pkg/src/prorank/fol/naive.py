"""Reference (Tarskian) evaluation by exhaustive quantifier loops.

Outer quantifiers run as Python loops in element-index order with
short-circuiting; once the remaining subformula is small enough
(``|G|^depth`` below ``vector_limit``) its quantifiers become numpy axes and
are reduced with ``any``/``all``. Both are plain exhaustive enumeration;
vectorization only changes the constant factor. Term values whose free
variables are all axis variables are cached across outer iterations.

The step budget counts atomic equations actually evaluated (one per
assignment), so short-circuiting sentences with a large worst case still run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import DEFAULT_CAPS, Caps
from ..errors import SpecError, Undecided
from ..group import FiniteGroup
from .syntax import (And, Eq, Exists, Formula, Implies, Inv, Mul, Not, One, Or,
                     Pow, Quantifier, Term, Var, free_vars, quantifier_depth, term_vars)

VECTOR_LIMIT = 1 << 22


@dataclass
class Outcome:
    value: bool
    witness: dict[str, int] = field(default_factory=dict)
    # "witness" for a true outer ∃-block, "counterexample" for a false outer ∀-block
    witness_kind: str = ""


def estimated_cost(G: FiniteGroup, f: Formula) -> int:
    return G.order ** quantifier_depth(f)


class NaiveEvaluator:
    def __init__(self, G: FiniteGroup, caps: Caps = DEFAULT_CAPS, vector_limit: int = VECTOR_LIMIT):
        self.G = G
        self.caps = caps
        self.vector_limit = vector_limit
        self._cache: dict = {}
        self._width = 0
        self._elements = np.arange(G.order)
        self.steps = 0

    def _tick(self, k: int) -> None:
        self.steps += k
        if self.steps > self.caps.steps:
            raise Undecided("steps", self.caps.steps, f"after {self.steps} atomic evaluations")

    def evaluate(self, f: Formula, env: dict[str, int] | None = None) -> bool:
        return self.run(f, env).value

    def run(self, f: Formula, env: dict[str, int] | None = None, want_witness: bool = False) -> Outcome:
        env = dict(env or {})
        missing = free_vars(f) - set(env)
        if missing:
            raise SpecError(f"unassigned free variables: {sorted(missing)}")
        for k, v in env.items():
            if not 0 <= int(v) < self.G.order:
                raise SpecError(f"value of {k} out of range")
        self.steps = 0
        self._cache.clear()
        if want_witness and isinstance(f, Quantifier):
            return self._outer_block(f, env)
        return Outcome(bool(self._eval(f, env, {}, 0)))

    def _outer_block(self, f: Formula, env: dict) -> Outcome:
        kind = type(f)
        names = []
        body = f
        while isinstance(body, kind):
            names.append(body.var)
            body = body.body
        n = self.G.order
        target = kind is Exists  # value that decides the block
        assign = dict(env)
        idx = [0] * len(names)
        while True:
            for v, i in zip(names, idx):
                assign[v] = i
            if bool(self._eval(body, assign, {}, 0)) == target:
                w = {v: assign[v] for v in names}
                return Outcome(target, w, "witness" if target else "counterexample")
            k = len(idx) - 1
            while k >= 0:
                idx[k] += 1
                if idx[k] < n:
                    break
                idx[k] = 0
                k -= 1
            if k < 0:
                return Outcome(not target)

    # -- evaluation; ``axes`` maps vector variables to their axis number

    def _term(self, t: Term, env: dict, axes: dict):
        if axes and not (term_vars(t) & set(env)) and term_vars(t):
            key = (t, tuple(sorted((v, axes[v]) for v in term_vars(t))), self._width)
            hit = self._cache.get(key)
            if hit is None:
                hit = self._term_raw(t, env, axes)
                if len(self._cache) < 4096:
                    self._cache[key] = hit
            return hit
        return self._term_raw(t, env, axes)

    def _term_raw(self, t: Term, env: dict, axes: dict):
        G = self.G
        if isinstance(t, Var):
            if t.name in env:
                return env[t.name]
            return self._axis_values(axes[t.name])
        if isinstance(t, One):
            return 0
        if isinstance(t, Mul):
            return G.mul(self._term(t.left, env, axes), self._term(t.right, env, axes))
        if isinstance(t, Inv):
            return G.inverse[self._term(t.arg, env, axes)]
        if isinstance(t, Pow):
            return G.power(self._term(t.base, env, axes), t.exp)
        raise TypeError(t)

    def _axis_values(self, axis: int) -> np.ndarray:
        shape = [1] * self._width
        shape[axis] = self.G.order
        return self._elements.reshape(shape)

    def _eval(self, f: Formula, env: dict, axes: dict, ndim: int):
        if isinstance(f, Eq):
            res = np.equal(self._term(f.left, env, axes), self._term(f.right, env, axes))
            self._tick(int(np.size(res)))
            return res
        if isinstance(f, Not):
            return np.logical_not(self._eval(f.arg, env, axes, ndim))
        if isinstance(f, And):
            acc = True
            for a in f.args:
                r = self._eval(a, env, axes, ndim)
                acc = np.logical_and(acc, r)
                if np.ndim(acc) == 0 and not acc:
                    return False
                if np.ndim(acc) and not acc.any():
                    return acc
            return acc
        if isinstance(f, Or):
            acc = False
            for a in f.args:
                r = self._eval(a, env, axes, ndim)
                acc = np.logical_or(acc, r)
                if np.ndim(acc) == 0 and acc:
                    return True
                if np.ndim(acc) and acc.all():
                    return acc
            return acc
        if isinstance(f, Implies):
            left = self._eval(f.left, env, axes, ndim)
            if np.ndim(left) == 0 and not left:
                return True
            return np.logical_or(np.logical_not(left), self._eval(f.right, env, axes, ndim))
        if isinstance(f, Quantifier):
            return self._quant(f, env, axes, ndim)
        raise TypeError(f)

    def _quant(self, f, env: dict, axes: dict, ndim: int):
        n = self.G.order
        is_ex = isinstance(f, Exists)
        inner_env = {k: v for k, v in env.items() if k != f.var}
        inner_axes = {k: v for k, v in axes.items() if k != f.var}
        if not axes and n ** quantifier_depth(f) <= self.vector_limit:
            # open a vector region; every array in it has ``self._width`` dimensions
            self._width = quantifier_depth(f)
            res = self._reduce(f, inner_env, inner_axes, 0)
            return bool(np.asarray(res).all())
        if axes:
            return self._reduce(f, inner_env, inner_axes, ndim)
        for g in range(n):
            inner_env[f.var] = g
            r = bool(self._eval(f.body, inner_env, inner_axes, ndim))
            if r == is_ex:
                return is_ex
        return not is_ex

    def _reduce(self, f, env: dict, axes: dict, ndim: int):
        axes[f.var] = ndim
        res = np.asarray(self._eval(f.body, env, axes, ndim + 1))
        if res.ndim == 0:
            return res  # body does not depend on the new axis
        if isinstance(f, Exists):
            return res.any(axis=ndim, keepdims=True)
        return res.all(axis=ndim, keepdims=True)


def eval_naive(G: FiniteGroup, f: Formula, env: dict[str, int] | None = None,
               caps: Caps = DEFAULT_CAPS) -> bool:
    return NaiveEvaluator(G, caps).evaluate(f, env)
