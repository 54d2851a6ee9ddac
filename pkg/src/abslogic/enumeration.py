"""Exhaustive generation of small posets, lattices, Heyting algebras and logics.

Isomorphism classes are identified with a canonical labelling found by
colour refinement plus individualization: refine the partition of points by
their up/down neighbourhood colours, split the first non-singleton cell on
each of its members in turn, and keep the lexicographically least adjacency
encoding over all leaves.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

from .abstract_logic import AbstractLogic, validate_logic
from .core_order import (
    ExprSet,
    FiniteLattice,
    FinitePoset,
    HeytingAlgebra,
    bits,
    heyting_implication,
    mask_of,
    upset_lattice,
    validate_poset,
)
from .duality import DualSpace, heyting_to_logic, lattice_to_logic
from .errors import BudgetExceeded, StructureError


@dataclass(frozen=True)
class EnumBudget:
    max_points: int = 5
    max_lattice: int = 32
    max_structures: int = 10_000
    max_maps: int = 200_000
    seed: int = 0

    def __post_init__(self):
        for name in ("max_points", "max_lattice", "max_structures", "max_maps"):
            if getattr(self, name) <= 0:
                raise StructureError(f"{name} must be positive")


DEFAULT_BUDGET = EnumBudget()

# canonical labelling explores at least |Aut| leaves; cap the search
_MAX_CANON_SIZE = 64
_MAX_LEAVES = 200_000


# -- canonical forms -----------------------------------------------------------------

def _refine(n, up, down, colors):
    ncells = len(set(colors))
    while True:
        sigs = []
        for v in range(n):
            above = tuple(sorted(colors[u] for u in bits(up[v] & ~(1 << v))))
            below = tuple(sorted(colors[u] for u in bits(down[v] & ~(1 << v))))
            sigs.append((colors[v], above, below))
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [rank[s] for s in sigs]
        if len(rank) == ncells:
            return colors
        ncells = len(rank)


def _encode(n, up, perm):
    pos = [0] * n
    for k, v in enumerate(perm):
        pos[v] = k
    return tuple(mask_of(pos[u] for u in bits(up[v])) for v in perm)


def canonical_labelling(poset: FinitePoset) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(encoding, perm)``: the least encoding over the search tree and a
    permutation realizing it (``perm[k]`` is the old point at position k)."""
    n = poset.size
    if n > _MAX_CANON_SIZE:
        raise BudgetExceeded(f"canonical form of {n} points exceeds {_MAX_CANON_SIZE}")
    up, down = poset.up, poset.down
    best = [None, None]
    leaves = [0]

    def search(colors):
        colors = _refine(n, up, down, colors)
        cells = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        split = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if split is None:
            leaves[0] += 1
            if leaves[0] > _MAX_LEAVES:
                raise BudgetExceeded("canonical labelling search too large")
            perm = tuple(sorted(range(n), key=colors.__getitem__))
            enc = _encode(n, up, perm)
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, perm
            return
        for v in cells[split]:
            search([2 * c + (1 if c == split and u != v else 0) for u, c in enumerate(colors)])

    search([0] * n)
    return best[0], best[1]


def canonical_form(poset: FinitePoset) -> FinitePoset:
    _, perm = canonical_labelling(poset)
    return poset.relabel(perm)


def canonical_iso_class(structure: Union[FinitePoset, FiniteLattice, HeytingAlgebra, DualSpace]):
    """Hashable key, equal exactly for isomorphic structures of the same kind.

    Lattices (and Heyting algebras, whose implication is determined by the
    order) are compared through their orders.
    """
    if isinstance(structure, FinitePoset):
        kind, order = "poset", structure
    elif isinstance(structure, FiniteLattice):
        kind, order = "lattice", structure.poset
    elif isinstance(structure, HeytingAlgebra):
        kind, order = "lattice", structure.lattice.poset
    elif isinstance(structure, DualSpace):
        kind, order = "poset", structure.order
    else:
        raise StructureError(f"no canonical form for {type(structure).__name__}")
    enc, _ = canonical_labelling(order)
    return (kind, order.size, enc)


# -- posets ----------------------------------------------------------------------------

def _downsets(poset: FinitePoset) -> list[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for d in frontier:
            for x in range(poset.size):
                if not d >> x & 1:
                    e = d | poset.down[x]
                    if e not in seen:
                        seen.add(e)
                        nxt.append(e)
        frontier = nxt
    return sorted(seen)


@lru_cache(maxsize=None)
def _posets(n: int) -> tuple[FinitePoset, ...]:
    if n == 0:
        return (FinitePoset(0, ()),)
    found = {}
    # every poset arises from a smaller one by adding a maximal point on top
    # of a down-set
    for small in _posets(n - 1):
        for d in _downsets(small):
            up = [u | (1 << (n - 1)) if d >> i & 1 else u for i, u in enumerate(small.up)]
            up.append(1 << (n - 1))
            p = FinitePoset(n, tuple(up))
            enc, perm = canonical_labelling(p)
            if enc not in found:
                found[enc] = p.relabel(perm)
    return tuple(found[k] for k in sorted(found))


def enumerate_posets(n: int, budget: EnumBudget = DEFAULT_BUDGET) -> list[FinitePoset]:
    """All posets on ``n`` points up to isomorphism, in canonical form and
    sorted by canonical encoding."""
    if n < 1:
        raise StructureError("n must be at least 1")
    if n > budget.max_points:
        raise BudgetExceeded(f"n = {n} exceeds max_points = {budget.max_points}")
    out = list(_posets(n))
    if len(out) > budget.max_structures:
        raise BudgetExceeded(f"{len(out)} posets exceed max_structures")
    return out


def sample_posets(n: int, count: int, budget: EnumBudget = DEFAULT_BUDGET,
                  density: float = 0.3) -> list[FinitePoset]:
    """Random posets (labelled, possibly repeated) for sizes past the
    exhaustive range.  Deterministic for a given ``budget.seed``."""
    rng = random.Random(budget.seed)
    out = []
    for _ in range(count):
        rel = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
        out.append(validate_poset(n, rel))
    return out


# -- lattices and logics ----------------------------------------------------------------

def enumerate_distributive_lattices(max_size: int,
                                    budget: EnumBudget = DEFAULT_BUDGET) -> list[FiniteLattice]:
    """Up-set lattices of all posets with 1..``budget.max_points`` points,
    kept when the carrier has at most ``max_size`` elements.

    Every finite distributive lattice is an up-set lattice, and
    non-isomorphic posets give non-isomorphic lattices, so this is the full
    list of distributive lattices reachable within the point budget.
    Ordered by size, then canonical key.
    """
    if max_size < 2:
        raise StructureError("max_size must be at least 2")
    if max_size > budget.max_lattice:
        raise BudgetExceeded(f"max_size {max_size} exceeds max_lattice {budget.max_lattice}")
    keyed = {}
    for n in range(1, budget.max_points + 1):
        if n + 1 > max_size:
            break
        for p in enumerate_posets(n, budget):
            lat = upset_lattice(p)
            if lat.size <= max_size:
                keyed.setdefault(canonical_iso_class(lat), lat)
                if len(keyed) > budget.max_structures:
                    raise BudgetExceeded("too many lattices")
    return [keyed[k] for k in sorted(keyed, key=lambda k: (k[1], k))]


def enumerate_heyting_algebras(max_size: int,
                               budget: EnumBudget = DEFAULT_BUDGET) -> list[HeytingAlgebra]:
    return [heyting_implication(lat) for lat in enumerate_distributive_lattices(max_size, budget)]


def enumerate_filter_logics(max_size: int, heyting: bool = False,
                            budget: EnumBudget = DEFAULT_BUDGET) -> list[AbstractLogic]:
    """Proper-filter logics of the enumerated distributive lattices, with the
    implication table attached when ``heyting`` is set."""
    if heyting:
        return [heyting_to_logic(h) for h in enumerate_heyting_algebras(max_size, budget)]
    return [lattice_to_logic(lat) for lat in enumerate_distributive_lattices(max_size, budget)]


def enumerate_closure_systems(expr_count: int,
                              budget: EnumBudget = DEFAULT_BUDGET) -> list[AbstractLogic]:
    """Every nonempty intersection-closed family over ``expr_count``
    expressions, as connective-free logics, sorted by family."""
    if expr_count > 4:
        raise BudgetExceeded("closure systems are enumerated for at most 4 expressions")
    subsets = range(1 << expr_count)
    seen = set()
    frontier = []
    for s in subsets:
        fam = frozenset([s])
        seen.add(fam)
        frontier.append(fam)
    while frontier:
        nxt = []
        for fam in frontier:
            for s in subsets:
                if s in fam:
                    continue
                grown = set(fam)
                grown.add(s)
                grown |= {s & t for t in fam}
                grown = frozenset(grown)
                if grown not in seen:
                    seen.add(grown)
                    nxt.append(grown)
                    if len(seen) > budget.max_structures * 10:
                        raise BudgetExceeded("too many closure systems")
        frontier = nxt
    fams = sorted(seen, key=lambda f: sorted(f))
    return [validate_logic(expr_count, [ExprSet(expr_count, m) for m in sorted(f)]) for f in fams]


def iter_all_structures(max_size: int = 32, budget: EnumBudget = DEFAULT_BUDGET) -> Iterable:
    """Distributive lattices with their Heyting algebras and filter logics."""
    for lat in enumerate_distributive_lattices(max_size, budget):
        h = heyting_implication(lat)
        yield lat, h, heyting_to_logic(h)
