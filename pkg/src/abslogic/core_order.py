"""Finite posets, lattices, filters and Heyting implication.

Subsets of a finite universe are int bitmasks throughout (bit ``i`` set means
element ``i`` is a member).  :class:`ExprSet` wraps a mask together with the
size of its universe; the raw mask doubles as the canonical sort key, so the
"lexicographic on canonical encoding" order used by every list-returning
function is plain integer order on masks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    CycleDetected,
    DegenerateLattice,
    IndexOutOfRange,
    NotALattice,
    NotHeyting,
    StructureError,
)

Table = tuple[tuple[int, ...], ...]


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class ExprSet:
    """A subset of ``{0, ..., universe_size - 1}``."""

    universe_size: int
    mask: int = 0

    def __post_init__(self):
        if self.universe_size < 0:
            raise StructureError("universe size must be >= 0")
        if self.mask < 0 or self.mask >> self.universe_size:
            raise IndexOutOfRange(max(bits(self.mask)) if self.mask > 0 else self.mask,
                                  self.universe_size)

    @classmethod
    def of(cls, universe_size: int, members: Iterable[int] = ()) -> "ExprSet":
        m = 0
        for i in members:
            if not 0 <= i < universe_size:
                raise IndexOutOfRange(i, universe_size)
            m |= 1 << i
        return cls(universe_size, m)

    @classmethod
    def full(cls, universe_size: int) -> "ExprSet":
        return cls(universe_size, (1 << universe_size) - 1)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    def __iter__(self):
        return bits(self.mask)

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, i):
        return isinstance(i, int) and i >= 0 and bool(self.mask >> i & 1)

    def _check(self, other):
        if not isinstance(other, ExprSet):
            return NotImplemented
        if other.universe_size != self.universe_size:
            raise StructureError("sets live in different universes")
        return other

    def __and__(self, other):
        other = self._check(other)
        return ExprSet(self.universe_size, self.mask & other.mask)

    def __or__(self, other):
        other = self._check(other)
        return ExprSet(self.universe_size, self.mask | other.mask)

    def __sub__(self, other):
        other = self._check(other)
        return ExprSet(self.universe_size, self.mask & ~other.mask)

    def issubset(self, other: "ExprSet") -> bool:
        return self.mask & ~other.mask == 0

    def issuperset(self, other: "ExprSet") -> bool:
        return other.mask & ~self.mask == 0

    def isdisjoint(self, other: "ExprSet") -> bool:
        return self.mask & other.mask == 0

    def complement(self) -> "ExprSet":
        return ExprSet(self.universe_size, ((1 << self.universe_size) - 1) & ~self.mask)

    def __repr__(self):
        return f"ExprSet({self.universe_size}, {set(self.members) or '{}'})"


def sort_sets(sets: Iterable[ExprSet]) -> list[ExprSet]:
    return sorted(set(sets), key=lambda s: s.mask)


# -- posets ------------------------------------------------------------------

@dataclass(frozen=True)
class FinitePoset:
    """Partial order on ``range(size)``; ``up[i]`` is the mask of all ``j >= i``.

    Construction validates reflexivity, transitivity and antisymmetry.  Use
    :func:`validate_poset` to build one from a cover (or any) relation.
    """

    size: int
    up: tuple[int, ...]
    names: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        n = self.size
        if n < 0 or len(self.up) != n:
            raise StructureError("up table length must equal size")
        if self.names is not None and len(self.names) != n:
            raise StructureError("one name per point required")
        full = (1 << n) - 1
        for i, u in enumerate(self.up):
            if u & ~full:
                raise IndexOutOfRange(max(bits(u)), n)
            if not u >> i & 1:
                raise StructureError(f"relation is not reflexive at {i}")
            for j in bits(u):
                if self.up[j] & ~u:
                    raise StructureError(f"relation is not transitive at ({i}, {j})")
                if j != i and self.up[j] >> i & 1:
                    raise CycleDetected(i, j)

    @cached_property
    def down(self) -> tuple[int, ...]:
        d = [0] * self.size
        for i, u in enumerate(self.up):
            for j in bits(u):
                d[j] |= 1 << i
        return tuple(d)

    def leq(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    @property
    def relation(self) -> set[tuple[int, int]]:
        return {(i, j) for i in range(self.size) for j in bits(self.up[i])}

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Hasse diagram: pairs (a, b) with a < b and nothing strictly between."""
        out = []
        for a in range(self.size):
            strict = self.up[a] & ~(1 << a)
            for b in bits(strict):
                between = strict & self.down[b] & ~(1 << b)
                if not between:
                    out.append((a, b))
        return tuple(out)

    def name(self, i: int) -> str:
        return self.names[i] if self.names is not None else str(i)

    def upset(self, mask: int) -> int:
        """Up-closure of a point mask."""
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def downset(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def is_upset(self, mask: int) -> bool:
        return self.upset(mask) == mask

    def relabel(self, perm: Sequence[int]) -> "FinitePoset":
        """Poset whose point ``k`` is the old point ``perm[k]``."""
        pos = {old: new for new, old in enumerate(perm)}
        up = tuple(mask_of(pos[j] for j in bits(self.up[old])) for old in perm)
        names = tuple(self.names[old] for old in perm) if self.names else None
        return FinitePoset(self.size, up, names)


def validate_poset(size: int, relation: Iterable[tuple[int, int]],
                   names: Optional[Sequence[str]] = None) -> FinitePoset:
    """Reflexive-transitive closure of ``relation`` on ``range(size)``.

    ``relation`` is typically the cover relation; any generating relation
    works.  Raises :class:`CycleDetected` when the closure is not antisymmetric.
    """
    up = [1 << i for i in range(size)]
    for a, b in relation:
        for x in (a, b):
            if not 0 <= x < size:
                raise IndexOutOfRange(x, size)
        up[a] |= 1 << b
    for k in range(size):
        for i in range(size):
            if up[i] >> k & 1:
                up[i] |= up[k]
    for i in range(size):
        for j in bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                raise CycleDetected(i, j)
    return FinitePoset(size, tuple(up), tuple(names) if names is not None else None)


# -- lattices ----------------------------------------------------------------

@dataclass(frozen=True)
class FiniteLattice:
    poset: FinitePoset
    meet: Table
    join: Table
    bot: Optional[int] = None
    top: Optional[int] = None

    def __post_init__(self):
        p = self.poset
        n = p.size
        if len(self.meet) != n or len(self.join) != n:
            raise StructureError("meet/join tables must be n x n")
        for a in range(n):
            if len(self.meet[a]) != n or len(self.join[a]) != n:
                raise StructureError("meet/join tables must be n x n")
            for b in range(n):
                m, j = self.meet[a][b], self.join[a][b]
                lower = p.down[a] & p.down[b]
                upper = p.up[a] & p.up[b]
                if not (lower >> m & 1) or lower & ~p.down[m]:
                    raise StructureError(f"meet[{a}][{b}] = {m} is not the glb")
                if not (upper >> j & 1) or upper & ~p.up[j]:
                    raise StructureError(f"join[{a}][{b}] = {j} is not the lub")
        full = (1 << n) - 1
        if self.bot is not None and p.up[self.bot] != full:
            raise StructureError("bot is not below everything")
        if self.top is not None and p.down[self.top] != full:
            raise StructureError("top is not above everything")

    @property
    def size(self) -> int:
        return self.poset.size

    @property
    def names(self):
        return self.poset.names

    def name(self, i: int) -> str:
        return self.poset.name(i)

    def leq(self, a: int, b: int) -> bool:
        return self.poset.leq(a, b)

    @property
    def bounded(self) -> bool:
        return self.bot is not None and self.top is not None

    def meet_all(self, elements: Iterable[int]) -> int:
        it = iter(elements)
        acc = next(it)
        for x in it:
            acc = self.meet[acc][x]
        return acc


def lattice_from_order(poset: FinitePoset) -> FiniteLattice:
    """Meet and join tables from the order; :class:`NotALattice` on the first
    pair (lexicographic) lacking a glb or lub."""
    n = poset.size
    up, down = poset.up, poset.down
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            lower = down[a] & down[b]
            glb = next((g for g in bits(lower) if lower & ~down[g] == 0), None)
            if glb is None:
                raise NotALattice(a, b, "greatest lower bound")
            upper = up[a] & up[b]
            lub = next((u for u in bits(upper) if upper & ~up[u] == 0), None)
            if lub is None:
                raise NotALattice(a, b, "least upper bound")
            meet[a][b] = meet[b][a] = glb
            join[a][b] = join[b][a] = lub
    full = (1 << n) - 1
    bot = next((i for i in range(n) if up[i] == full), None)
    top = next((i for i in range(n) if down[i] == full), None)
    return FiniteLattice(poset, tuple(map(tuple, meet)), tuple(map(tuple, join)), bot, top)


def distributivity_witness(lat: FiniteLattice) -> Optional[tuple[int, int, int]]:
    """First triple (a, b, c) with a & (b | c) != (a & b) | (a & c), or None."""
    meet, join = lat.meet, lat.join
    n = lat.size
    for a in range(n):
        ma = meet[a]
        for b in range(n):
            jab = join[ma[b]]
            for c in range(n):
                if ma[join[b][c]] != jab[ma[c]]:
                    return (a, b, c)
    return None


def is_distributive(lat: FiniteLattice) -> bool:
    return distributivity_witness(lat) is None


def _principal_filters(lat: FiniteLattice) -> list[int]:
    # A filter of a finite lattice contains the meet of its members, so it is
    # the principal filter of that meet.  Closing generator sets under
    # pairwise meets therefore never leaves the principal family.
    return sorted(set(lat.poset.up))


def _is_prime_filter(lat: FiniteLattice, f: int) -> bool:
    n = lat.size
    join = lat.join
    for a in range(n):
        if f >> a & 1:
            continue
        row = join[a]
        for b in range(n):
            if not f >> b & 1 and f >> row[b] & 1:
                return False
    return True


def filter_masks(lat: FiniteLattice, kind: str = "all") -> list[int]:
    if kind not in ("all", "proper", "prime"):
        raise StructureError(f"unknown filter kind {kind!r}")
    found = _principal_filters(lat)
    if kind == "all":
        return found
    if not lat.bounded or lat.bot == lat.top:
        raise DegenerateLattice()
    proper = [f for f in found if not f >> lat.bot & 1]
    if kind == "proper":
        return proper
    return [f for f in proper if _is_prime_filter(lat, f)]


def filters(lat: FiniteLattice, kind: str = "all") -> list[ExprSet]:
    """Filters of ``lat`` in canonical order.  ``kind`` is ``all``, ``proper``
    or ``prime``."""
    return [ExprSet(lat.size, f) for f in filter_masks(lat, kind)]


# -- Heyting algebras --------------------------------------------------------

@dataclass(frozen=True)
class HeytingAlgebra:
    lattice: FiniteLattice
    impl: Table

    def __post_init__(self):
        lat = self.lattice
        n = lat.size
        if not lat.bounded:
            raise StructureError("a Heyting algebra must be bounded")
        if len(self.impl) != n or any(len(r) != n for r in self.impl):
            raise StructureError("implication table must be n x n")
        down, meet = lat.poset.down, lat.meet
        for a in range(n):
            for b in range(n):
                # z <= a->b  iff  z & a <= b, for every z at once
                below = down[self.impl[a][b]]
                good = mask_of(z for z in range(n) if down[b] >> meet[z][a] & 1)
                if below != good:
                    raise NotHeyting(a, b)

    @property
    def size(self) -> int:
        return self.lattice.size

    def name(self, i: int) -> str:
        return self.lattice.name(i)

    @cached_property
    def neg(self) -> tuple[int, ...]:
        """Pseudocomplement a -> bot (derived, not stored)."""
        bot = self.lattice.bot
        return tuple(row[bot] for row in self.impl)


def _relative_pseudocomplement(lat: FiniteLattice, a: int, b: int) -> Optional[int]:
    down, meet, join = lat.poset.down, lat.meet, lat.join
    cands = [z for z in range(lat.size) if down[b] >> meet[z][a] & 1]
    if not cands:
        return None
    top = cands[0]
    for z in cands[1:]:
        top = join[top][z]
    # the join of the candidates is their maximum iff it is itself a candidate
    return top if down[b] >> meet[top][a] & 1 else None


def heyting_implication(lat: FiniteLattice) -> HeytingAlgebra:
    """Relative pseudocomplement table a -> b = max{z : z & a <= b}.

    On failure the witness is the first failing pair of incomparable elements
    in lexicographic order, or the first failing pair overall when every
    failure involves comparable elements.
    """
    n = lat.size
    if n == 0 or not lat.bounded:
        raise StructureError("Heyting implication needs a nonempty bounded lattice")
    impl = [[0] * n for _ in range(n)]
    failures = []
    for a in range(n):
        for b in range(n):
            r = _relative_pseudocomplement(lat, a, b)
            if r is None:
                failures.append((a, b))
            else:
                impl[a][b] = r
    if failures:
        incomparable = [(a, b) for a, b in failures
                        if not lat.leq(a, b) and not lat.leq(b, a)]
        raise NotHeyting(*(incomparable or failures)[0])
    return HeytingAlgebra(lat, tuple(map(tuple, impl)))


# -- up-set lattices ---------------------------------------------------------

def upset_masks(poset: FinitePoset) -> list[int]:
    """All up-closed subsets of the poset, sorted by mask."""
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for x in range(poset.size):
                if not u >> x & 1:
                    v = u | poset.up[x]
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
        frontier = nxt
    return sorted(seen)


def upsets(poset: FinitePoset) -> list[ExprSet]:
    return [ExprSet(poset.size, m) for m in upset_masks(poset)]


def set_name(mask: int, names: Sequence[str]) -> str:
    return "{" + ",".join(names[i] for i in bits(mask)) + "}"


def upset_lattice(poset: FinitePoset) -> FiniteLattice:
    """Lattice of up-sets under inclusion (meet = intersection, join = union).

    Element ``k`` is the ``k``-th up-set in mask order, so ``0`` is the empty
    set and the last element is the whole poset.
    """
    ups = upset_masks(poset)
    index = {m: k for k, m in enumerate(ups)}
    m = len(ups)
    up = tuple(mask_of(j for j in range(m) if ups[i] & ~ups[j] == 0) for i in range(m))
    pnames = [poset.name(i) for i in range(poset.size)]
    names = tuple(set_name(u, pnames) for u in ups)
    order = FinitePoset(m, up, names)
    meet = tuple(tuple(index[ups[i] & ups[j]] for j in range(m)) for i in range(m))
    join = tuple(tuple(index[ups[i] | ups[j]] for j in range(m)) for i in range(m))
    return FiniteLattice(order, meet, join, 0, m - 1)


# -- standard small structures ----------------------------------------------

def _chain_names(n):
    if n == 1:
        return ("0",)
    inner = [chr(ord("a") + i) for i in range(n - 2)]
    return ("0", *inner, "1")


def chain_poset(n: int, names=None) -> FinitePoset:
    return validate_poset(n, [(i, i + 1) for i in range(n - 1)], names)


def antichain_poset(n: int, names=None) -> FinitePoset:
    return validate_poset(n, [], names)


def chain_lattice(n: int) -> FiniteLattice:
    """The n-element chain 0 < a < b < ... < 1."""
    return lattice_from_order(chain_poset(n, _chain_names(n)))


def diamond() -> FiniteLattice:
    """The four-element Boolean lattice 2x2: 0 < x, y < 1."""
    return lattice_from_order(validate_poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)],
                                             ("0", "x", "y", "1")))


def m3() -> FiniteLattice:
    """Bottom, three pairwise incomparable atoms a, b, c, top."""
    covers = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]
    return lattice_from_order(validate_poset(5, covers, ("0", "a", "b", "c", "1")))


def n5() -> FiniteLattice:
    """The pentagon 0 < a < c < 1, 0 < b < 1."""
    covers = [(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]
    return lattice_from_order(validate_poset(5, covers, ("0", "a", "b", "c", "1")))
