"""Quantifier-prefix classification.

Every formula gets a pair of levels ``(sigma, pi)``: the least ``n`` such that
standard prenex rewriting yields an ∃-first (resp. ∀-first) prefix with ``n``
alternating blocks. Boolean connectives take componentwise maxima, negation
swaps the pair, and a quantifier either merges into the leading block of the
body or opens a new one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import And, Eq, Exists, Forall, Formula, Implies, Not, Or


@dataclass(frozen=True)
class PrefixClass:
    blocks: tuple[str, ...]  # e.g. ("E", "A", "E")

    def __str__(self) -> str:
        return "".join("∃" if b == "E" else "∀" for b in self.blocks) or "quantifier-free"

    @property
    def ascii(self) -> str:
        return "".join(self.blocks) or "-"


def levels(f: Formula) -> tuple[int, int]:
    if isinstance(f, Eq):
        return 0, 0
    if isinstance(f, Not):
        s, p = levels(f.arg)
        return p, s
    if isinstance(f, (And, Or)):
        ls = [levels(a) for a in f.args]
        return max(s for s, _ in ls), max(p for _, p in ls)
    if isinstance(f, Implies):
        sl, pl = levels(f.left)
        sr, pr = levels(f.right)
        return max(pl, sr), max(sl, pr)
    if isinstance(f, Exists):
        s, p = levels(f.body)
        s2 = min(max(s, 1), p + 1)
        return s2, s2 + 1
    if isinstance(f, Forall):
        s, p = levels(f.body)
        p2 = min(max(p, 1), s + 1)
        return p2 + 1, p2
    raise TypeError(f)


def prefix_class(f: Formula) -> PrefixClass:
    s, p = levels(f)
    if s == 0 and p == 0:
        return PrefixClass(())
    if s <= p:
        return PrefixClass(tuple("EA"[i % 2] for i in range(s)))
    return PrefixClass(tuple("AE"[i % 2] for i in range(p)))
