"""Logic <-> lattice <-> dual space constructions and their round trips.

A distributive logic orders its expressions by the sets of prime theories
containing them; the induced preorder collapses to a lattice on classes of
logically equivalent expressions.  Going back, a bounded distributive lattice
yields the logic whose theories are its proper filters.  Dual spaces are the
prime filters under inclusion; at finite size every topology involved is
discrete, so a space is just that poset plus its named open families.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

from .abstract_logic import AbstractLogic, classify_logic, validate_logic
from .core_order import (
    ExprSet,
    FiniteLattice,
    FinitePoset,
    HeytingAlgebra,
    bits,
    distributivity_witness,
    filter_masks,
    heyting_implication,
    mask_of,
    set_name,
    upset_lattice,
    upset_masks,
)
from .errors import (
    AdjunctionFailure,
    DegenerateLattice,
    NotDistributive,
    NotDistributiveLogic,
    NotIntuitionisticLogic,
    NotWellDefinedOnQuotient,
    RoundtripMismatch,
    StructureError,
)

FLAVORS = ("priestley", "spectral", "esakia")


@dataclass(frozen=True)
class QuotientLattice:
    lattice: FiniteLattice
    class_of: tuple[int, ...]
    representative: tuple[int, ...]

    def __post_init__(self):
        if set(self.class_of) != set(range(self.lattice.size)):
            raise StructureError("class map must be onto the carrier")
        if any(self.class_of[r] != c for c, r in enumerate(self.representative)):
            raise StructureError("representatives must lie in their own class")


def _as_lattice(structure):
    if isinstance(structure, HeytingAlgebra):
        return structure.lattice, structure
    if isinstance(structure, FiniteLattice):
        return structure, None
    raise StructureError(f"expected a lattice or Heyting algebra, got {type(structure).__name__}")


def logic_to_lattice(logic: AbstractLogic) -> QuotientLattice:
    """Lattice of expression classes ordered by inclusion of prime sets.

    Meet and join of classes come from the logic's connective tables; the
    :class:`FiniteLattice` constructor checks that they really are the glb and
    lub of the induced order.
    """
    if not classify_logic(logic).distributive:
        raise NotDistributiveLogic()
    s = logic.s_sets
    reps: list[int] = []
    index: dict[int, int] = {}
    class_of = []
    for e, se in enumerate(s):
        if se not in index:
            index[se] = len(reps)
            reps.append(e)
        class_of.append(index[se])
    m = len(reps)
    sets = [s[r] for r in reps]
    up = tuple(mask_of(d for d in range(m) if sets[c] & ~sets[d] == 0) for c in range(m))
    names = tuple(logic.name(r) for r in reps) if logic.names is not None else None
    order = FinitePoset(m, up, names)
    meet = tuple(tuple(class_of[logic.meet[reps[c]][reps[d]]] for d in range(m)) for c in range(m))
    join = tuple(tuple(class_of[logic.join[reps[c]][reps[d]]] for d in range(m)) for c in range(m))
    bot = class_of[logic.bot] if logic.bot is not None else None
    top = class_of[logic.top] if logic.top is not None else None
    lat = FiniteLattice(order, meet, join, bot, top)
    w = distributivity_witness(lat)
    if w is not None:
        raise NotDistributive(w)
    return QuotientLattice(lat, tuple(class_of), tuple(reps))


def _check_bounded_distributive(lat: FiniteLattice):
    if not lat.bounded or lat.bot == lat.top:
        raise DegenerateLattice()
    w = distributivity_witness(lat)
    if w is not None:
        raise NotDistributive(w)


def lattice_to_logic(lat: FiniteLattice) -> AbstractLogic:
    """Logic over the carrier whose theories are the proper filters."""
    lat, _ = _as_lattice(lat)
    _check_bounded_distributive(lat)
    return validate_logic(lat.size, [ExprSet(lat.size, f) for f in filter_masks(lat, "proper")],
                          join=lat.join, meet=lat.meet, bot=lat.bot, top=lat.top,
                          names=lat.names)


def heyting_to_logic(h: HeytingAlgebra) -> AbstractLogic:
    """Filter logic of ``h`` with the implication table attached.

    Postcondition, verified exhaustively: for every prime filter T,
    ``a -> b`` is in T iff every prime filter above T containing ``a``
    contains ``b``.
    """
    logic = lattice_to_logic(h.lattice).with_connectives(impl=h.impl)
    primes = filter_masks(h.lattice, "prime")
    n = h.size
    for t in primes:
        above = [u for u in primes if u & t == t]
        for a in range(n):
            with_a = [u for u in above if u >> a & 1]
            for b in range(n):
                if bool(t >> h.impl[a][b] & 1) != all(u >> b & 1 for u in with_a):
                    raise StructureError(f"prime filter implication condition fails at ({a}, {b})")
    return logic


def logic_to_heyting(logic: AbstractLogic) -> tuple[QuotientLattice, HeytingAlgebra]:
    """Quotient lattice plus the Heyting table read off the logic's
    implication.  The table must be well defined on classes and satisfy the
    adjunction z <= a->b iff z & a <= b for every triple of classes."""
    cls = classify_logic(logic)
    if not (cls.distributive and cls.bounded):
        raise NotIntuitionisticLogic("logic is not bounded distributive")
    if logic.impl is None:
        raise NotIntuitionisticLogic("logic has no implication")
    q = logic_to_lattice(logic)
    lat, co, reps = q.lattice, q.class_of, q.representative
    m = lat.size
    himpl = [[co[logic.impl[reps[c]][reps[d]]] for d in range(m)] for c in range(m)]
    n = logic.expr_count
    for a in range(n):
        for b in range(n):
            if co[logic.impl[a][b]] != himpl[co[a]][co[b]]:
                raise NotWellDefinedOnQuotient(a, b)
    down, meet = lat.poset.down, lat.meet
    for z in range(m):
        for a in range(m):
            for b in range(m):
                lhs = bool(down[himpl[a][b]] >> z & 1)
                rhs = bool(down[b] >> meet[z][a] & 1)
                if lhs != rhs:
                    raise AdjunctionFailure(z, a, b)
    return q, HeytingAlgebra(lat, tuple(map(tuple, himpl)))


# -- dual spaces -----------------------------------------------------------------

@dataclass(frozen=True)
class DualSpace:
    """Prime filters of a bounded distributive lattice under inclusion.

    ``points[k]`` is a prime filter over the lattice carrier; ``basic_opens[a]``
    is the set S_a of points containing element ``a`` (a set over point
    indices).  Construction checks that every S_a is an up-set; for the
    Priestley and Esakia readings a -> S_a must be a bijection onto the
    up-sets, and for the spectral reading the unions of basic opens must be
    exactly the up-sets.
    """

    points: tuple[ExprSet, ...]
    order: FinitePoset
    basic_opens: tuple[ExprSet, ...]
    flavor: str = "priestley"
    carrier_names: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise StructureError(f"unknown flavor {self.flavor!r}")
        k = len(self.points)
        if self.order.size != k:
            raise StructureError("order size must match the number of points")
        for i, p in enumerate(self.points):
            for j, q in enumerate(self.points):
                if self.order.leq(i, j) != p.issubset(q):
                    raise StructureError("point order must be inclusion of filters")
        ups = set(upset_masks(self.order))
        opens = [s.mask for s in self.basic_opens]
        for a, s in enumerate(opens):
            if s not in ups:
                raise StructureError(f"S_{a} is not an up-set")
        if self.flavor == "spectral":
            unions = {0}
            for s in opens:
                unions |= {u | s for u in unions}
            if unions != ups:
                raise StructureError("unions of basic opens are not the up-sets")
        elif len(set(opens)) != len(opens) or set(opens) != ups:
            raise StructureError("a -> S_a is not a bijection onto the up-sets")

    @property
    def size(self) -> int:
        return len(self.points)

    @cached_property
    def opens(self) -> tuple[ExprSet, ...]:
        return tuple(ExprSet(self.size, m) for m in upset_masks(self.order))

    def point_name(self, k: int) -> str:
        return self.order.name(k)


def dual_space(structure: Union[FiniteLattice, HeytingAlgebra], flavor: str = "priestley") -> DualSpace:
    """Prime-filter space of a bounded distributive lattice.

    The Esakia reading needs a Heyting algebra (computed when a plain lattice
    is given) and additionally verifies, for all a, b, that the down-closure of
    S_a minus S_b is the complement of S_{a->b}.
    """
    if flavor not in FLAVORS:
        raise StructureError(f"unknown flavor {flavor!r}")
    lat, h = _as_lattice(structure)
    if flavor == "esakia" and h is None:
        h = heyting_implication(lat)
    _check_bounded_distributive(lat)
    primes = filter_masks(lat, "prime")
    k = len(primes)
    n = lat.size
    up = tuple(mask_of(j for j in range(k) if primes[i] & ~primes[j] == 0) for i in range(k))
    cnames = tuple(lat.name(i) for i in range(n))
    order = FinitePoset(k, up, tuple(set_name(p, cnames) for p in primes))
    opens = [mask_of(i for i in range(k) if primes[i] >> a & 1) for a in range(n)]
    space = DualSpace(tuple(ExprSet(n, p) for p in primes), order,
                      tuple(ExprSet(k, s) for s in opens), flavor, cnames)
    if flavor == "esakia":
        whole = (1 << k) - 1
        for a in range(n):
            for b in range(n):
                lhs = order.downset(opens[a] & ~opens[b])
                if lhs != whole & ~opens[h.impl[a][b]]:
                    raise StructureError(f"Esakia identity fails at ({a}, {b})")
    return space


def space_to_lattice(space: DualSpace) -> Union[FiniteLattice, HeytingAlgebra]:
    """Up-set lattice of the point order; a Heyting algebra for Esakia spaces."""
    lat = upset_lattice(space.order)
    if space.flavor == "esakia":
        return heyting_implication(lat)
    return lat


# -- round trips -----------------------------------------------------------------

@dataclass(frozen=True)
class LogicRoundtrip:
    """``class_map[e]`` is the expression of the rebuilt logic that ``e``
    lands on; ``theory_map`` pairs each theory with its image."""

    class_map: tuple[int, ...]
    theory_map: tuple[tuple[ExprSet, ExprSet], ...]
    exact: bool
    rebuilt: AbstractLogic


def roundtrip_logic(logic: AbstractLogic) -> LogicRoundtrip:
    """Rebuild the logic from its lattice and match theory families.

    The match is taken through the class map.  When no two expressions are
    equivalent the class map is a bijection and the families must coincide
    exactly (``exact``); otherwise each theory must be a union of classes and
    the images must be exactly the rebuilt theories.
    """
    q = logic_to_lattice(logic)
    rebuilt = lattice_to_logic(q.lattice)
    co = q.class_of
    n, m = logic.expr_count, q.lattice.size
    targets = rebuilt.theory_mask_set
    pairs = []
    hit = set()
    for t in logic.theory_masks:
        image = mask_of(co[e] for e in bits(t))
        back = mask_of(e for e in range(n) if image >> co[e] & 1)
        if back != t:
            raise RoundtripMismatch(ExprSet(n, t), "theory is not a union of classes")
        if image not in targets:
            raise RoundtripMismatch(ExprSet(n, t), "image is not a proper filter")
        hit.add(image)
        pairs.append((ExprSet(n, t), ExprSet(m, image)))
    for u in rebuilt.theory_masks:
        if u not in hit:
            raise RoundtripMismatch(ExprSet(m, u), "proper filter is not the image of a theory")
    return LogicRoundtrip(tuple(co), tuple(pairs), m == n, rebuilt)


@dataclass(frozen=True)
class LatticeRoundtrip:
    """``iso[a]`` is the index in ``upsets`` of S_a; ``via_logic[a]`` is the
    class of ``a`` after passing through the filter logic and back."""

    iso: tuple[int, ...]
    space: DualSpace
    upsets: Union[FiniteLattice, HeytingAlgebra]
    via_logic: tuple[int, ...]


def _check_iso(src: FiniteLattice, dst: FiniteLattice, f, h_src=None, h_dst=None):
    n = src.size
    if dst.size != n or sorted(f) != list(range(n)):
        raise RoundtripMismatch(tuple(f), "map is not a bijection")
    for a in range(n):
        for b in range(n):
            if src.leq(a, b) != dst.leq(f[a], f[b]):
                raise RoundtripMismatch((a, b), "order not preserved and reflected")
    if f[src.bot] != dst.bot or f[src.top] != dst.top:
        raise RoundtripMismatch((src.bot, src.top), "bounds not preserved")
    if h_src is not None:
        for a in range(n):
            for b in range(n):
                if f[h_src.impl[a][b]] != h_dst.impl[f[a]][f[b]]:
                    raise RoundtripMismatch((a, b), "implication not preserved")


def roundtrip_lattice(structure: Union[FiniteLattice, HeytingAlgebra]) -> LatticeRoundtrip:
    """Check ``a -> S_a`` is an isomorphism onto the up-set lattice of the dual
    space, and that lattice -> filter logic -> lattice returns the original."""
    lat, h = _as_lattice(structure)
    flavor = "esakia" if h is not None else "priestley"
    space = dual_space(structure, flavor)
    rebuilt = space_to_lattice(space)
    rlat, rh = _as_lattice(rebuilt)
    index = {m: k for k, m in enumerate(upset_masks(space.order))}
    iso = tuple(index[s.mask] for s in space.basic_opens)
    _check_iso(lat, rlat, iso, h, rh)

    if h is not None:
        q, hq = logic_to_heyting(heyting_to_logic(h))
    else:
        q, hq = logic_to_lattice(lattice_to_logic(lat)), None
    _check_iso(lat, q.lattice, q.class_of, h, hq)
    return LatticeRoundtrip(iso, space, rebuilt, q.class_of)
