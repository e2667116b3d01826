"""Symbolic (virtually) pro-p families and their exact finite quotients.

Families:

* ``UniformAbelian(p, d)``: ``Z_p^d``; level k is ``(C_{p^k})^d``.
* ``AbelianTimesTorsion(p, d, T)``: ``Z_p^d x T`` with ``T`` a finite powerful
  p-group; level k is ``(C_{p^k})^d x T``.
* ``JordanMetabelian(p, n)``: ``C ⋉ A`` with ``C = <c> ≅ Z_p``, ``A ≅ Z_p^n``
  and ``a_i^c = a_i a_{i+1}`` (``a_n`` fixed); level k is
  ``C_{p^m} ⋉ (C_{p^k})^n`` where ``p^m`` is the exact order of the Jordan block
  modulo ``p^k``. The designated powerful subgroup is ``F = <c^p> ⋉ A``.
* ``FamilyProduct(factors)``: direct product of families over distinct primes.

Projections between levels are built from generator images and verified to
be homomorphisms.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import SpecError, Undecided
from .group import (AbelianLaw, CyclicLaw, FiniteGroup, Homomorphism, ProductLaw, Subgroup,
                    hom_from_generators, is_prime)
from .invariants import frattini_series, is_powerful, min_generators, omega1, rank
from .spec import (CyclicSpec, GroupSpec, ProductSpec, abelian, elaborate, semidirect,
                   spec_from_json, spec_to_json)


@dataclass(frozen=True)
class UniformAbelian:
    p: int
    d: int


@dataclass(frozen=True)
class AbelianTimesTorsion:
    p: int
    d: int
    T: GroupSpec


@dataclass(frozen=True)
class JordanMetabelian:
    p: int
    n: int


@dataclass(frozen=True)
class FamilyProduct:
    factors: tuple


ProPFamily = Union[UniformAbelian, AbelianTimesTorsion, JordanMetabelian, FamilyProduct]


@dataclass(frozen=True)
class TowerLevel:
    family: ProPFamily
    depth: int
    group: FiniteGroup
    generators: tuple[int, ...]  # images of the family's standard generators
    F: Subgroup  # designated powerful subgroup at this level

    def projection_to(self, lower: "TowerLevel") -> Homomorphism:
        """Reduction map onto a shallower level of the same family."""
        if lower.family != self.family or lower.depth > self.depth:
            raise SpecError("projection needs a shallower level of the same family")
        return hom_from_generators(self.group, lower.group, self.generators, lower.generators)


def check_family(fam: ProPFamily, caps: Caps = DEFAULT_CAPS) -> None:
    if isinstance(fam, FamilyProduct):
        ps = [family_prime(f) for f in fam.factors]
        if len(set(ps)) != len(ps):
            raise SpecError("product families need distinct primes")
        for f in fam.factors:
            check_family(f, caps)
        return
    if not is_prime(fam.p):
        raise SpecError(f"{fam.p} is not prime")
    if isinstance(fam, (UniformAbelian, AbelianTimesTorsion)) and fam.d < 0:
        raise SpecError("d must be nonnegative")
    if isinstance(fam, AbelianTimesTorsion):
        T = torsion_group(fam, caps)
        if not T.is_p_group(fam.p):
            raise SpecError(f"torsion part is not a {fam.p}-group")
        if not is_powerful(T, fam.p):
            raise SpecError("torsion part is not powerful")
    if isinstance(fam, JordanMetabelian) and fam.n < 0:
        raise SpecError("n must be nonnegative")


def family_prime(fam: ProPFamily) -> int:
    if isinstance(fam, FamilyProduct):
        raise SpecError("product families have several primes")
    return fam.p


def family_primes(fam: ProPFamily) -> list[int]:
    if isinstance(fam, FamilyProduct):
        return sorted(family_prime(f) for f in fam.factors)
    return [fam.p]


def torsion_group(fam: AbelianTimesTorsion, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    return elaborate(fam.T, caps)


def jordan_matrix(n: int) -> np.ndarray:
    M = np.eye(n, dtype=np.int64)
    for i in range(n - 1):
        M[i + 1, i] = 1
    return M


def jordan_order_exponent(p: int, n: int, depth: int) -> int:
    """Least m with J^(p^m) = I modulo p^depth, by repeated p-th powering."""
    mod = p ** depth
    M = jordan_matrix(n) % mod
    eye = np.eye(n, dtype=np.int64) % mod
    m = 0
    while not np.array_equal(M, eye):
        M = np.linalg.matrix_power(M.astype(object), p).astype(np.int64) % mod
        m += 1
    return m


def level_order(fam: ProPFamily, depth: int, caps: Caps = DEFAULT_CAPS) -> int:
    if isinstance(fam, UniformAbelian):
        return fam.p ** (depth * fam.d)
    if isinstance(fam, AbelianTimesTorsion):
        return fam.p ** (depth * fam.d) * torsion_group(fam, caps).order
    if isinstance(fam, JordanMetabelian):
        return fam.p ** (jordan_order_exponent(fam.p, fam.n, depth) + depth * fam.n)
    return math.prod(level_order(f, depth, caps) for f in fam.factors)


def finite_quotient(fam: ProPFamily, depth: int, caps: Caps = DEFAULT_CAPS) -> TowerLevel:
    if depth < 1:
        raise SpecError("depth must be positive")
    if depth > caps.tower_depth:
        raise Undecided("tower_depth", caps.tower_depth, f"depth {depth}")
    size = level_order(fam, depth, caps)
    if size > caps.tower_order:
        raise Undecided("tower_order", caps.tower_order, f"level of order {size}")
    return _finite_quotient(fam, depth, caps)


@functools.lru_cache(maxsize=32)
def _finite_quotient(fam: ProPFamily, depth: int, caps: Caps) -> TowerLevel:
    cap = caps.tower_order
    if isinstance(fam, UniformAbelian):
        G = abelian([fam.p ** depth] * fam.d, caps, cap=cap,
                    label=f"(C{fam.p ** depth})^{fam.d}")
        return TowerLevel(fam, depth, G, G.generators, G.whole)
    if isinstance(fam, AbelianTimesTorsion):
        T = torsion_group(fam, caps)
        U = abelian([fam.p ** depth] * fam.d, caps, cap=cap)
        G = _product(U, T, caps, f"(C{fam.p ** depth})^{fam.d} x {T.label}")
        nT = T.order
        gens = tuple([u * nT for u in U.generators] + list(T.generators))
        return TowerLevel(fam, depth, G, gens, G.whole)
    if isinstance(fam, JordanMetabelian):
        p, n = fam.p, fam.n
        m = jordan_order_exponent(p, n, depth)
        G = semidirect(p ** m, [p ** depth] * n, jordan_matrix(n), caps, cap=cap,
                       label=f"C{p ** m}:(C{p ** depth})^{n}")
        base = math.prod([p ** depth] * n)
        c = base if m > 0 else 0
        gens = tuple(([c] if m > 0 else []) + [base // (p ** depth) ** (i + 1) for i in range(n)])
        # F = <c^p> A: exponent of c divisible by p
        mask = (np.arange(G.order) // base) % p == 0
        F = Subgroup.from_mask(G, mask, tuple(([p * base] if m > 1 else []) + list(gens[1 if m > 0 else 0:])))
        return TowerLevel(fam, depth, G, gens, F)
    if isinstance(fam, FamilyProduct):
        levels = [_finite_quotient(f, depth, caps) for f in fam.factors]
        G, gens, F = levels[0].group, levels[0].generators, levels[0].F.elements
        for lv in levels[1:]:
            nH = lv.group.order
            newG = _product(G, lv.group, caps, f"{G.label} x {lv.group.label}")
            gens = tuple([g * nH for g in gens] + list(lv.generators))
            F = (F[:, None] * nH + lv.F.elements[None, :]).ravel()
            G = newG
        return TowerLevel(fam, depth, G, gens, Subgroup(G, F, _trusted=True))
    raise SpecError(f"unknown family {fam!r}")


def _product(A: FiniteGroup, B: FiniteGroup, caps: Caps, label: str) -> FiniteGroup:
    if B.order == 1:
        A.label = label
        return A
    if A.order == 1:
        return FiniteGroup(B.order, B.law, label=label, gens=B.generators, table_limit=caps.table)
    if isinstance(A.law, (AbelianLaw, CyclicLaw)) and isinstance(B.law, (AbelianLaw, CyclicLaw)):
        mods = _moduli(A) + _moduli(B)
        law = AbelianLaw(mods)
        return FiniteGroup(A.order * B.order, law, label=label, gens=list(law.strides),
                           table_limit=caps.table)
    gens = [g * B.order for g in A.generators] + list(B.generators)
    return FiniteGroup(A.order * B.order, ProductLaw(A, B), label=label, gens=gens,
                       table_limit=caps.table)


def _moduli(G: FiniteGroup) -> tuple[int, ...]:
    return G.law.moduli if isinstance(G.law, AbelianLaw) else (G.law.n,)


# ---------------------------------------------------------------------------
# closed forms


def dim_analytic(fam: ProPFamily):
    if isinstance(fam, (UniformAbelian, AbelianTimesTorsion)):
        return fam.d
    if isinstance(fam, JordanMetabelian):
        return fam.n + 1
    return {family_prime(f): dim_analytic(f) for f in fam.factors}


def torsion_rank(fam: ProPFamily, caps: Caps = DEFAULT_CAPS):
    if isinstance(fam, (UniformAbelian, JordanMetabelian)):
        return 0
    if isinstance(fam, AbelianTimesTorsion):
        return min_generators(torsion_group(fam, caps), caps=caps)
    return {family_prime(f): torsion_rank(f, caps) for f in fam.factors}


def rank_upper_bound(fam: ProPFamily, caps: Caps = DEFAULT_CAPS) -> int:
    """Structural bound: ``rank(N) + rank(G/N)`` along an abelian normal series."""
    if isinstance(fam, UniformAbelian):
        return fam.d
    if isinstance(fam, AbelianTimesTorsion):
        return fam.d + rank(torsion_group(fam, caps), caps=caps)
    if isinstance(fam, JordanMetabelian):
        return fam.n + 1
    return max(rank_upper_bound(f, caps) for f in fam.factors)


# ---------------------------------------------------------------------------
# estimators


def _chain_layers(orders: list[int], p: int) -> list[int]:
    out = []
    for a, b in zip(orders, orders[1:]):
        if a == 1:
            break
        out.append(round(math.log(a // b, p)))
    return out


def frattini_layers(level: TowerLevel, caps: Caps = DEFAULT_CAPS) -> list[int]:
    """``log_p |Φ^k(F) / Φ^(k+1)(F)|`` for the designated F until the series reaches 1."""
    p = family_prime(level.family)
    chain = frattini_series(level.group, caps.tower_depth * 4, level.F, caps)
    return _chain_layers(chain.orders, p)


def level_layers(fam: ProPFamily, depth: int, caps: Caps = DEFAULT_CAPS,
                 route: str = "auto") -> list[int]:
    """Frattini layers of the designated F at level ``depth``, by an exact route.

    Levels within the group order cap are enumerated. Beyond it: Φ^k of a direct
    product is the product of the Φ^k, Φ^k((Z/p^depth)^d) = p^k (Z/p^depth)^d,
    and Jordan levels go through the lattice model. ``route`` may force
    "enumerate" or "structure" instead of choosing by size.
    """
    if route not in ("auto", "enumerate", "structure"):
        raise SpecError(f"unknown route {route!r}")
    if depth > caps.tower_depth:
        raise Undecided("tower_depth", caps.tower_depth, f"depth {depth}")
    if route == "enumerate" or (route == "auto" and level_order(fam, depth, caps) <= caps.order):
        return frattini_layers(finite_quotient(fam, depth, caps), caps)
    if isinstance(fam, (UniformAbelian, AbelianTimesTorsion)):
        free = [fam.d] * depth if fam.d else []
        if isinstance(fam, UniformAbelian):
            return free
        T = torsion_group(fam, caps)
        tors = _chain_layers(frattini_series(T, caps.tower_depth * 4, caps=caps).orders, fam.p)
        width = max(len(free), len(tors))
        free += [0] * (width - len(free))
        tors += [0] * (width - len(tors))
        return [a + b for a, b in zip(free, tors)]
    if isinstance(fam, JordanMetabelian) and fam.p > max(fam.n, 2):
        from .lattice import JordanLevelModel
        model = JordanLevelModel(fam, depth)
        terms = model.frattini_series(model.F, caps.tower_depth * 4)
        return _chain_layers([fam.p ** t.log_order for t in terms], fam.p)
    return frattini_layers(finite_quotient(fam, depth, caps), caps)


def interior_window(layers: list[int], skip_top: int, skip_bottom: int, window: int) -> int | None:
    inner = layers[skip_top:len(layers) - skip_bottom if skip_bottom else None]
    for i in range(len(inner) - window + 1):
        chunk = inner[i:i + window]
        if len(set(chunk)) == 1:
            return chunk[0]
    return None


def default_skips(fam: ProPFamily, caps: Caps = DEFAULT_CAPS) -> tuple[int, int]:
    t = torsion_group(fam, caps).order if isinstance(fam, AbelianTimesTorsion) else 1
    p = family_prime(fam)
    top = math.ceil(round(math.log(t, p), 9)) + 1 if t > 1 else 1
    return top, 2


def dim_estimate(fam: ProPFamily, window: int = 2, caps: Caps = DEFAULT_CAPS,
                 skip_top: int | None = None, skip_bottom: int | None = None) -> int:
    """Constant interior value of the Frattini layer sizes of the designated F."""
    if window < 2:
        raise SpecError("window must be at least 2")
    if isinstance(fam, FamilyProduct):
        return {family_prime(f): dim_estimate(f, window, caps, skip_top, skip_bottom)
                for f in fam.factors}
    top, bottom = default_skips(fam, caps)
    top = top if skip_top is None else skip_top
    bottom = bottom if skip_bottom is None else skip_bottom
    depth = max(1, top + bottom + window - 1)
    while True:
        if level_order(fam, depth, caps) == level_order(fam, depth + 1, caps):
            return 0  # the tower is constant: a finite group has dimension 0
        value = interior_window(level_layers(fam, depth, caps), top, bottom, window)
        if value is not None:
            return value
        depth += 1


def omega1_stable(fam: ProPFamily, p: int | None = None, caps: Caps = DEFAULT_CAPS,
                  level: int = 1, readings: int = 2, on_f: bool = False) -> int:
    """log_p of |Ω₁| of the pro-p group, read through the images in a fixed level.

    For K = level+1, level+2, ... the elements of order dividing p in level K
    are projected to ``level``; the count is returned once ``readings``
    consecutive K agree. With ``on_f`` the count is taken in the designated
    powerful subgroup F instead of the whole group.
    """
    if isinstance(fam, FamilyProduct):
        if p is None:
            return {family_prime(f): omega1_stable(f, None, caps, level, readings, on_f)
                    for f in fam.factors}
        fam = next(f for f in fam.factors if family_prime(f) == p)
    p = family_prime(fam) if p is None else p
    if p != family_prime(fam):
        return 0
    low = finite_quotient(fam, level, caps)
    history: list[int] = []
    K = level + 1
    while True:
        high = finite_quotient(fam, K, caps)
        proj = high.projection_to(low)
        image = np.unique(proj.map[omega1(high.group, p, high.F if on_f else None)])
        history.append(image.size)
        if len(history) >= readings and len(set(history[-readings:])) == 1:
            return round(math.log(image.size, p))
        K += 1


def d_stable(fam: ProPFamily, caps: Caps = DEFAULT_CAPS, start: int = 1, readings: int = 2) -> int:
    """d of the pro-p group: d of the levels once ``readings`` consecutive agree."""
    history: list[int] = []
    k = start
    while True:
        lv = finite_quotient(fam, k, caps)
        history.append(min_generators(lv.group, caps=caps))
        if len(history) >= readings and len(set(history[-readings:])) == 1:
            return history[-1]
        k += 1


def frattini_level(fam: ProPFamily, j: int, depth: int, caps: Caps = DEFAULT_CAPS):
    """``G_depth / Φ^j(F)`` with its projection; the kernel is computed, not assumed."""
    from .group import quotient
    from .invariants import iterated_frattini
    lv = finite_quotient(fam, depth, caps)
    N = iterated_frattini(lv.group, j, lv.F, caps)
    Q, proj = quotient(lv.group, N, label=f"{lv.group.label}/Phi^{j}(F)")
    return lv, N, Q, proj


# ---------------------------------------------------------------------------
# file format


def family_to_json(fam: ProPFamily) -> dict:
    if isinstance(fam, UniformAbelian):
        return {"type": "uniform_abelian", "p": fam.p, "d": fam.d}
    if isinstance(fam, AbelianTimesTorsion):
        return {"type": "abelian_times_torsion", "p": fam.p, "d": fam.d, "T": spec_to_json(fam.T)}
    if isinstance(fam, JordanMetabelian):
        return {"type": "jordan_metabelian", "p": fam.p, "n": fam.n}
    return {"type": "product", "factors": [family_to_json(f) for f in fam.factors]}


def family_from_json(obj) -> ProPFamily:
    if not isinstance(obj, dict) or "type" not in obj:
        raise SpecError("family must be an object with a 'type' field")
    kind = obj["type"]
    try:
        if kind == "uniform_abelian":
            return UniformAbelian(int(obj["p"]), int(obj["d"]))
        if kind == "abelian_times_torsion":
            return AbelianTimesTorsion(int(obj["p"]), int(obj["d"]), spec_from_json(obj["T"]))
        if kind == "jordan_metabelian":
            return JordanMetabelian(int(obj["p"]), int(obj["n"]))
        if kind == "product":
            return FamilyProduct(tuple(family_from_json(f) for f in obj["factors"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed {kind} family: {exc}") from exc
    raise SpecError(f"unknown family type {kind!r}")


def load_family_file(path: str | Path) -> ProPFamily:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(doc, dict) and "family" in doc:
        doc = doc["family"]
    return family_from_json(doc)


def describe_family(fam: ProPFamily) -> str:
    if isinstance(fam, UniformAbelian):
        return f"uniform_abelian({fam.p},{fam.d})"
    if isinstance(fam, AbelianTimesTorsion):
        from .spec import describe
        return f"abelian_times_torsion({fam.p},{fam.d},{describe(fam.T)})"
    if isinstance(fam, JordanMetabelian):
        return f"jordan_metabelian({fam.p},{fam.n})"
    return " x ".join(describe_family(f) for f in fam.factors)


def torsion_spec(*orders: int) -> GroupSpec:
    """Abelian torsion spec from cyclic factor orders."""
    if len(orders) == 1:
        return CyclicSpec(orders[0])
    return ProductSpec(tuple(CyclicSpec(o) for o in orders))
