"""Group descriptions and their elaboration into :class:`FiniteGroup` objects.

A group file is a JSON document ``{"format_version": 1, "label": ..., "spec": ...}``
where ``spec`` is one of::

    {"type": "cyclic", "n": 6}
    {"type": "cayley", "table": [[0, 1], [1, 0]]}               # row-major, 0-based
    {"type": "permutations", "degree": 3, "generators": ["(0 1)", [1, 2, 0]]}
    {"type": "product", "factors": [spec, spec, ...]}
    {"type": "semidirect", "actor": 2, "base": [3, 3], "matrix": [[-1, 0], [0, -1]]}

In a semidirect spec the actor ``C_m = <c>`` acts on the abelian base
``Z/base[0] + ... + Z/base[k-1]`` by ``v^c = M v`` (columns are the images of
the standard generators).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import SpecError, Undecided
from .group import AbelianLaw, CyclicLaw, FiniteGroup, SemidirectLaw, direct_product

FORMAT_VERSION = 1


@dataclass(frozen=True)
class CyclicSpec:
    n: int


@dataclass(frozen=True)
class CayleySpec:
    table: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class PermutationSpec:
    degree: int
    generators: tuple[tuple[int, ...], ...]  # image lists


@dataclass(frozen=True)
class ProductSpec:
    factors: tuple["GroupSpec", ...]


@dataclass(frozen=True)
class SemidirectSpec:
    actor: int
    base: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]


GroupSpec = Union[CyclicSpec, CayleySpec, PermutationSpec, ProductSpec, SemidirectSpec]


# ---------------------------------------------------------------------------
# convenience constructors


def cyclic(n: int, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    return elaborate(CyclicSpec(n), caps)


def abelian(moduli: Sequence[int], caps: Caps = DEFAULT_CAPS, cap: int | None = None,
            label: str | None = None) -> FiniteGroup:
    """Direct sum of cyclic groups on mixed-radix codes."""
    moduli = tuple(int(m) for m in moduli if int(m) != 1)
    for m in moduli:
        if m < 1:
            raise SpecError("cyclic factor orders must be positive")
    n = math.prod(moduli)
    _check_cap(n, caps.order if cap is None else cap)
    if len(moduli) <= 1:
        k = moduli[0] if moduli else 1
        return FiniteGroup(k, CyclicLaw(k), label=label or f"C{k}", gens=[1] if k > 1 else [],
                           table_limit=caps.table)
    law = AbelianLaw(moduli)
    return FiniteGroup(n, law, label=label or "x".join(f"C{m}" for m in moduli),
                       gens=list(law.strides), table_limit=caps.table)


def semidirect(actor: int, base: Sequence[int], matrix, caps: Caps = DEFAULT_CAPS,
               cap: int | None = None, label: str | None = None) -> FiniteGroup:
    return _elaborate_semidirect(SemidirectSpec(int(actor), tuple(int(b) for b in base),
                                                _matrix_tuple(matrix)),
                                 caps, caps.order if cap is None else cap, label)


def permutation_group(degree: int, generators, caps: Caps = DEFAULT_CAPS,
                      label: str | None = None) -> FiniteGroup:
    gens = tuple(parse_permutation(g, degree) for g in generators)
    return elaborate(PermutationSpec(degree, gens), caps, label=label)


# ---------------------------------------------------------------------------
# elaboration


def elaborate(spec: GroupSpec, caps: Caps = DEFAULT_CAPS, label: str | None = None,
              cap: int | None = None) -> FiniteGroup:
    """Build a validated group from a spec; order must not exceed the cap."""
    limit = caps.order if cap is None else cap
    lab = label or describe(spec)
    if isinstance(spec, CyclicSpec):
        if spec.n < 1:
            raise SpecError("cyclic order must be positive")
        _check_cap(spec.n, limit)
        return FiniteGroup(spec.n, CyclicLaw(spec.n), label=lab,
                           gens=[1] if spec.n > 1 else [], table_limit=caps.table)
    if isinstance(spec, CayleySpec):
        _check_cap(len(spec.table), limit)
        if any(len(row) != len(spec.table) for row in spec.table):
            raise SpecError("Cayley table must be square")
        return FiniteGroup.from_table(np.array(spec.table, dtype=np.int64).reshape(
            len(spec.table), len(spec.table)), label=lab)
    if isinstance(spec, PermutationSpec):
        return _elaborate_permutations(spec, caps, limit, lab)
    if isinstance(spec, ProductSpec):
        if not spec.factors:
            return elaborate(CyclicSpec(1), caps, label=lab)
        if all(isinstance(f, CyclicSpec) for f in spec.factors):
            return abelian([f.n for f in spec.factors], caps, cap=limit, label=lab)
        total = 1
        for f in spec.factors:
            total *= _spec_order_bound(f)
        _check_cap(total, limit)
        G = elaborate(spec.factors[0], caps, cap=limit)
        for f in spec.factors[1:]:
            G = direct_product(G, elaborate(f, caps, cap=limit), caps, cap=limit)
        G.label = lab
        return G
    if isinstance(spec, SemidirectSpec):
        return _elaborate_semidirect(spec, caps, limit, lab)
    raise SpecError(f"unknown group spec {spec!r}")


def _check_cap(n: int, limit: int) -> None:
    if n > limit:
        raise Undecided("order", limit, f"group of order {n}")


def _spec_order_bound(spec: GroupSpec) -> int:
    if isinstance(spec, CyclicSpec):
        return spec.n
    if isinstance(spec, CayleySpec):
        return len(spec.table)
    if isinstance(spec, ProductSpec):
        return math.prod(_spec_order_bound(f) for f in spec.factors)
    if isinstance(spec, SemidirectSpec):
        return spec.actor * math.prod(spec.base)
    return 1  # permutation groups are checked during closure


def _elaborate_permutations(spec: PermutationSpec, caps: Caps, limit: int,
                            label: str) -> FiniteGroup:
    deg = spec.degree
    if deg < 1:
        raise SpecError("permutation degree must be positive")
    gens = [np.asarray(g, dtype=np.int64) for g in spec.generators]
    for g in gens:
        if g.shape != (deg,) or sorted(g.tolist()) != list(range(deg)):
            raise SpecError(f"not a permutation of degree {deg}: {g.tolist()}")
    ident = np.arange(deg)
    perms = [ident]
    index = {ident.tobytes(): 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = g[a]  # apply a, then g
                key = b.tobytes()
                if key not in index:
                    index[key] = len(perms)
                    perms.append(b)
                    nxt.append(b)
                    if len(perms) > limit:
                        raise Undecided("order", limit, "permutation closure")
        frontier = nxt
    P = np.array(perms, dtype=np.int64)
    n = len(perms)
    weights = np.random.default_rng(0).integers(1, 2**62, size=deg, dtype=np.int64)
    keys = P @ weights
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        comp = P[:, P[i]]  # row j: apply perm i, then perm j ... transposed below
        k = comp @ weights
        pos = np.searchsorted(sorted_keys, k)
        pos = np.minimum(pos, n - 1)
        idx = order[pos]
        if not np.array_equal(P[idx], comp):
            raise SpecError("internal: permutation hash collision")
        # comp row j is x -> P[j][P[i][x]], i.e. "apply i then j" = product i*j
        table[i] = idx
    return FiniteGroup.from_table(table, label=label)


def _matrix_tuple(matrix) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in matrix)


def _elaborate_semidirect(spec: SemidirectSpec, caps: Caps, limit: int,
                          label: str | None) -> FiniteGroup:
    m = spec.actor
    moduli = tuple(spec.base)
    k = len(moduli)
    if m < 1 or any(b < 1 for b in moduli):
        raise SpecError("actor and base orders must be positive")
    M = np.array(spec.matrix, dtype=np.int64).reshape(k, k) if k else np.zeros((0, 0), np.int64)
    if len(spec.matrix) != k or any(len(r) != k for r in spec.matrix):
        raise SpecError("action matrix must be square of the base's length")
    size = math.prod(moduli)
    _check_cap(m * size, limit)
    mod = np.array(moduli, dtype=np.int64)
    # column j must have order dividing moduli[j] in the base
    for i in range(k):
        for j in range(k):
            if (moduli[j] * M[i, j]) % moduli[i]:
                raise SpecError("action matrix does not define an endomorphism of the base")
    M = M % mod[:, None] if k else M
    law_base = AbelianLaw(moduli)
    # bijectivity on the base
    if k:
        v = law_base.decode(np.arange(size))
        img = [sum(M[i, j] * v[j] for j in range(k)) % moduli[i] for i in range(k)]
        codes = law_base.encode(img)
        if np.unique(codes).size != size:
            raise SpecError("action matrix is not an automorphism of the base")
    powers = np.zeros((m, k, k), dtype=np.int64)
    cur = np.eye(k, dtype=np.int64)
    for e in range(m):
        powers[e] = cur
        cur = (cur @ M) % mod[:, None] if k else cur
    if k and not np.array_equal(cur, np.eye(k, dtype=np.int64) % mod[:, None]):
        raise SpecError(f"action order does not divide the actor order {m}")
    gens = ([size] if m > 1 else []) + list(law_base.strides if k else [])
    gens = [g for g in gens if g < m * size and g != 0]
    return FiniteGroup(m * size, SemidirectLaw(m, moduli, powers),
                       label=label or describe(spec), gens=gens, table_limit=caps.table)


# ---------------------------------------------------------------------------
# text forms


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(g, degree: int) -> tuple[int, ...]:
    """Image list from either a list or cycle notation like ``"(0 1)(2 3 4)"``."""
    if isinstance(g, str):
        img = list(range(degree))
        text = g.strip()
        if text in ("", "()"):
            return tuple(img)
        if _CYCLE.sub("", text).strip():
            raise SpecError(f"bad cycle notation: {g!r}")
        used: set[int] = set()
        for body in _CYCLE.findall(text):
            pts = [int(x) for x in body.replace(",", " ").split()]
            if any(not 0 <= x < degree for x in pts) or len(set(pts)) != len(pts):
                raise SpecError(f"bad cycle {body!r} for degree {degree}")
            if used & set(pts):
                raise SpecError(f"cycles must be disjoint: {g!r}")
            used |= set(pts)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a] = b
        return tuple(img)
    img = tuple(int(x) for x in g)
    if sorted(img) != list(range(degree)):
        raise SpecError(f"{list(img)} is not a permutation of 0..{degree - 1}")
    return img


def describe(spec: GroupSpec) -> str:
    if isinstance(spec, CyclicSpec):
        return f"C{spec.n}"
    if isinstance(spec, CayleySpec):
        return f"table{len(spec.table)}"
    if isinstance(spec, PermutationSpec):
        return f"perm{spec.degree}<{len(spec.generators)} gens>"
    if isinstance(spec, ProductSpec):
        return "x".join(_wrap(describe(f)) for f in spec.factors) or "C1"
    if isinstance(spec, SemidirectSpec):
        base = "x".join(f"C{b}" for b in spec.base) or "C1"
        return f"C{spec.actor}:({base})"
    return "?"


def _wrap(s: str) -> str:
    return f"({s})" if ":" in s or "x" in s else s


def spec_to_json(spec: GroupSpec) -> dict:
    if isinstance(spec, CyclicSpec):
        return {"type": "cyclic", "n": spec.n}
    if isinstance(spec, CayleySpec):
        return {"type": "cayley", "table": [list(r) for r in spec.table]}
    if isinstance(spec, PermutationSpec):
        return {"type": "permutations", "degree": spec.degree,
                "generators": [list(g) for g in spec.generators]}
    if isinstance(spec, ProductSpec):
        return {"type": "product", "factors": [spec_to_json(f) for f in spec.factors]}
    if isinstance(spec, SemidirectSpec):
        return {"type": "semidirect", "actor": spec.actor, "base": list(spec.base),
                "matrix": [list(r) for r in spec.matrix]}
    raise SpecError(f"unknown group spec {spec!r}")


def spec_from_json(obj) -> GroupSpec:
    if not isinstance(obj, dict) or "type" not in obj:
        raise SpecError("group spec must be an object with a 'type' field")
    kind = obj["type"]
    try:
        if kind == "cyclic":
            return CyclicSpec(int(obj["n"]))
        if kind == "cayley":
            return CayleySpec(_matrix_tuple(obj["table"]))
        if kind == "permutations":
            deg = int(obj["degree"])
            return PermutationSpec(deg, tuple(parse_permutation(g, deg) for g in obj["generators"]))
        if kind == "product":
            return ProductSpec(tuple(spec_from_json(f) for f in obj["factors"]))
        if kind == "semidirect":
            return SemidirectSpec(int(obj["actor"]), tuple(int(b) for b in obj["base"]),
                                  _matrix_tuple(obj["matrix"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed {kind} spec: {exc}") from exc
    raise SpecError(f"unknown group spec type {kind!r}")


def load_group_file(path: str | Path, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict) or "spec" not in doc:
        raise SpecError(f"{path}: missing 'spec'")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise SpecError(f"{path}: unsupported format_version {version}")
    spec = spec_from_json(doc["spec"])
    return elaborate(spec, caps, label=doc.get("label") or None)


def dump_group_file(path: str | Path, spec: GroupSpec, label: str = "") -> None:
    doc = {"format_version": FORMAT_VERSION, "label": label or describe(spec),
           "spec": spec_to_json(spec)}
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
