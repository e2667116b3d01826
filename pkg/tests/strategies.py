"""Hypothesis strategies over small generated groups."""

from __future__ import annotations

from functools import lru_cache

from hypothesis import strategies as st

from prorank.verify.corpus import standard_corpus


@lru_cache(maxsize=None)
def small_corpus(max_order: int = 24, primes: tuple[int, ...] = (2, 3)):
    return tuple(standard_corpus(max_order, primes))


def corpus_groups(max_order: int = 24, primes: tuple[int, ...] = (2, 3)):
    return st.sampled_from(small_corpus(max_order, primes))


@st.composite
def group_and_elements(draw, max_order: int = 24, k: int = 3):
    G = draw(corpus_groups(max_order))
    xs = draw(st.lists(st.integers(0, G.order - 1), min_size=0, max_size=k))
    return G, xs
