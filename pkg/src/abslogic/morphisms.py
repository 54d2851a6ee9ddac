"""Maps between logics, lattices and dual spaces.

Covers the stability hierarchy of logic maps, lattice and Heyting
homomorphism checks, the correspondence between the two, and the
contravariant passage to maps of prime-filter spaces.  Every failed check
carries the lexicographically first counterexample.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Optional

from .abstract_logic import AbstractLogic, classify_logic
from .core_order import ExprSet, FiniteLattice, FinitePoset, HeytingAlgebra, bits
from .duality import (
    DualSpace,
    dual_space,
    heyting_to_logic,
    lattice_to_logic,
    logic_to_heyting,
    logic_to_lattice,
)
from .errors import BudgetExceeded, NotAHom, StructureError, UniverseMismatch


def structure_size(s) -> int:
    if isinstance(s, AbstractLogic):
        return s.expr_count
    if isinstance(s, (FiniteLattice, FinitePoset, HeytingAlgebra)):
        return s.size
    if isinstance(s, DualSpace):
        return len(s.points)
    raise UniverseMismatch(f"not a structure: {type(s).__name__}")


@dataclass(frozen=True)
class StructureMap:
    source: Any
    target: Any
    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(self.mapping))
        n, m = structure_size(self.source), structure_size(self.target)
        if len(self.mapping) != n:
            raise UniverseMismatch(f"map has {len(self.mapping)} entries, source has {n}")
        for v in self.mapping:
            if not 0 <= v < m:
                raise UniverseMismatch(f"image {v} outside target of size {m}")

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def preimage(self, mask: int) -> int:
        out = 0
        for i, v in enumerate(self.mapping):
            if mask >> v & 1:
                out |= 1 << i
        return out

    def image(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.mapping[i]
        return out


def identity_map(s) -> StructureMap:
    return StructureMap(s, s, tuple(range(structure_size(s))))


def compose(g: StructureMap, h: StructureMap) -> StructureMap:
    """``g o h`` (apply ``h`` first)."""
    if h.target != g.source:
        raise UniverseMismatch("maps are not composable")
    return StructureMap(h.source, g.target, tuple(g.mapping[v] for v in h.mapping))


@dataclass(frozen=True)
class Witness:
    """A counterexample: labelled items, each tagged with the side
    (``source`` or ``target``) whose names should be used to print it."""

    check: str
    items: tuple[tuple[str, Any, str], ...]


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witness: Optional[Witness] = None

    def __bool__(self):
        return self.holds


# -- stability -------------------------------------------------------------------

@dataclass(frozen=True)
class StabilityReport:
    is_logic_application: bool
    is_stable: bool
    is_strongly_stable: bool
    is_normal: bool
    witnesses: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.is_strongly_stable and not self.is_stable:
            raise StructureError("strongly stable must imply stable")
        if self.is_stable and not self.is_logic_application:
            raise StructureError("stable must imply logic application")
        if self.is_normal and not self.is_logic_application:
            raise StructureError("normal must imply logic application")


def _logics(h: StructureMap) -> tuple[AbstractLogic, AbstractLogic]:
    if not isinstance(h.source, AbstractLogic) or not isinstance(h.target, AbstractLogic):
        raise UniverseMismatch("stability is defined for maps between logics")
    return h.source, h.target


def stability_report(h: StructureMap) -> StabilityReport:
    src, tgt = _logics(h)
    n, m = src.expr_count, tgt.expr_count
    w = {}

    app = True
    for t in tgt.theory_masks:
        if h.preimage(t) not in src.theory_mask_set:
            app = False
            w["logic_application"] = Witness("logic_application", (("T′", ExprSet(m, t), "target"),))
            break

    stable = app
    src_primes = set(src.prime_masks)
    if not app:
        w["stable"] = Witness("stable", w["logic_application"].items)
    else:
        for p in tgt.prime_masks:
            if h.preimage(p) not in src_primes:
                stable = False
                w["stable"] = Witness("stable", (("P′", ExprSet(m, p), "target"),))
                break

    strong = stable
    if not stable:
        w["strongly_stable"] = Witness("strongly_stable", w["stable"].items)
    else:
        pre = {q: h.preimage(q) for q in tgt.prime_masks}
        for p_t in tgt.prime_masks:
            for p_s in src.prime_masks:
                if pre[p_t] & ~p_s:
                    continue
                if not any(q & p_t == p_t and pre[q] == p_s for q in tgt.prime_masks):
                    strong = False
                    w["strongly_stable"] = Witness("strongly_stable", (
                        ("P′", ExprSet(m, p_t), "target"), ("P", ExprSet(n, p_s), "source")))
                    break
            if not strong:
                break

    normal = app
    if not app:
        w["normal"] = Witness("normal", w["logic_application"].items)
    else:
        images = {h.preimage(t) for t in tgt.theory_masks}
        missing = [t for t in src.theory_masks if t not in images]
        if missing:
            normal = False
            w["normal"] = Witness("normal", (("T", ExprSet(n, missing[0]), "source"),))
    return StabilityReport(app, stable, strong, normal, w)


# -- homomorphisms ----------------------------------------------------------------

def _unwrap_lattice(s) -> FiniteLattice:
    if isinstance(s, HeytingAlgebra):
        return s.lattice
    if isinstance(s, FiniteLattice):
        return s
    raise UniverseMismatch(f"expected a lattice, got {type(s).__name__}")


def _lattices(f: StructureMap):
    return _unwrap_lattice(f.source), _unwrap_lattice(f.target)


def is_lattice_hom(f: StructureMap) -> CheckResult:
    """Meets and joins preserved; bounds preserved when both sides have them."""
    a_lat, b_lat = _lattices(f)
    g = f.mapping
    for label in ("bot", "top"):
        x, y = getattr(a_lat, label), getattr(b_lat, label)
        if x is not None and y is not None and g[x] != y:
            return CheckResult(False, Witness("lattice_hom", ((label, x, "source"),)))
    n = a_lat.size
    for a in range(n):
        for b in range(n):
            if g[a_lat.meet[a][b]] != b_lat.meet[g[a]][g[b]]:
                return CheckResult(False, Witness("lattice_hom", (
                    ("meet", a, "source"), ("meet", b, "source"))))
            if g[a_lat.join[a][b]] != b_lat.join[g[a]][g[b]]:
                return CheckResult(False, Witness("lattice_hom", (
                    ("join", a, "source"), ("join", b, "source"))))
    return CheckResult(True)


def is_heyting_hom(f: StructureMap) -> CheckResult:
    if not isinstance(f.source, HeytingAlgebra) or not isinstance(f.target, HeytingAlgebra):
        raise UniverseMismatch("Heyting homomorphisms need Heyting algebras on both sides")
    res = is_lattice_hom(f)
    if not res:
        return CheckResult(False, Witness("heyting_hom", res.witness.items))
    g, si, ti = f.mapping, f.source.impl, f.target.impl
    n = f.source.size
    for a in range(n):
        for b in range(n):
            if g[si[a][b]] != ti[g[a]][g[b]]:
                return CheckResult(False, Witness("heyting_hom", (
                    ("impl", a, "source"), ("impl", b, "source"))))
    return CheckResult(True)


# -- correspondence --------------------------------------------------------------

@dataclass(frozen=True)
class CorrespondenceReport:
    """Both sides of the logic-map / homomorphism correspondence on one map.

    ``lattice_hom`` and ``heyting_hom`` are ``None`` when the map is not well
    defined on expression classes (``well_defined`` false); the Heyting pair is
    ``None`` outside the intuitionistic case.
    """

    stable: bool
    lattice_hom: Optional[bool]
    strongly_stable: Optional[bool]
    heyting_hom: Optional[bool]
    well_defined: bool
    stability: StabilityReport
    lattice_map: Optional[StructureMap]

    @property
    def directions(self) -> dict:
        out = {
            "stable ⇒ lattice_hom": not self.stable or bool(self.lattice_hom),
            "lattice_hom ⇒ stable": not self.lattice_hom or self.stable,
        }
        if self.strongly_stable is not None:
            out["strongly_stable ⇒ heyting_hom"] = not self.strongly_stable or bool(self.heyting_hom)
            out["heyting_hom ⇒ strongly_stable"] = not self.heyting_hom or self.strongly_stable
        return out

    @property
    def consistent(self) -> bool:
        return all(self.directions.values())


def correspondence_check(f: StructureMap) -> CorrespondenceReport:
    """Evaluate stability on the logic side and homomorphism on the lattice
    side for the same map.

    ``f`` may go between logics (the lattice side is then the quotient
    lattices, Heyting when both logics are intuitionistic) or between lattices
    or Heyting algebras (the logic side is then their filter logics).
    """
    src, tgt = f.source, f.target
    if isinstance(src, AbstractLogic) and isinstance(tgt, AbstractLogic):
        heyting = classify_logic(src).intuitionistic and classify_logic(tgt).intuitionistic
        if heyting:
            qs, hs = logic_to_heyting(src)
            qt, ht = logic_to_heyting(tgt)
        else:
            qs, qt = logic_to_lattice(src), logic_to_lattice(tgt)
            hs, ht = qs.lattice, qt.lattice
        cmap = tuple(qt.class_of[f.mapping[r]] for r in qs.representative)
        well_defined = all(qt.class_of[f.mapping[e]] == cmap[qs.class_of[e]]
                           for e in range(src.expr_count))
        logic_map = f
        lattice_map = StructureMap(hs, ht, cmap) if well_defined else None
    else:
        _lattices(f)
        heyting = isinstance(src, HeytingAlgebra) and isinstance(tgt, HeytingAlgebra)
        to_logic = heyting_to_logic if heyting else lattice_to_logic
        logic_map = StructureMap(to_logic(src), to_logic(tgt), f.mapping)
        lattice_map = f
        well_defined = True

    stab = stability_report(logic_map)
    lat_hom = bool(is_lattice_hom(lattice_map)) if well_defined else None
    if heyting:
        heyt_hom = bool(is_heyting_hom(lattice_map)) if well_defined else None
        strong = stab.is_strongly_stable
    else:
        heyt_hom = strong = None
    return CorrespondenceReport(stab.is_stable, lat_hom, strong, heyt_hom,
                                well_defined, stab, lattice_map)


# -- dual maps ------------------------------------------------------------------------

def dualize_map(f: StructureMap, flavor: str = "priestley") -> StructureMap:
    """The point map P′ -> f⁻¹(P′) from the target's space to the source's.

    ``flavor="esakia"`` requires a Heyting homomorphism; the other flavors a
    (bounded) lattice homomorphism.
    """
    if flavor == "esakia":
        res = is_heyting_hom(f)
    else:
        res = is_lattice_hom(f)
    if not res:
        raise NotAHom(res.witness)
    x_src = dual_space(f.source, flavor)
    x_tgt = dual_space(f.target, flavor)
    index = {p.mask: k for k, p in enumerate(x_src.points)}
    mapping = []
    for p in x_tgt.points:
        pre = f.preimage(p.mask)
        if pre not in index:
            raise StructureError(f"preimage of {p} is not a prime filter")
        mapping.append(index[pre])
    return StructureMap(x_tgt, x_src, tuple(mapping))


def _orders(f: StructureMap) -> tuple[FinitePoset, FinitePoset]:
    def order(s):
        if isinstance(s, DualSpace):
            return s.order
        if isinstance(s, FinitePoset):
            return s
        raise UniverseMismatch(f"expected a space or poset, got {type(s).__name__}")
    return order(f.source), order(f.target)


def is_esakia_morphism(f: StructureMap) -> CheckResult:
    """Finite Esakia morphism (p-morphism): monotone, and every point above
    f(x) is the image of some point above x.

    On finite spaces every subset is clopen, so the topological conditions
    reduce to these two order conditions.
    """
    xs, ys = _orders(f)
    g = f.mapping
    for x in range(xs.size):
        for y in bits(xs.up[x]):
            if not ys.leq(g[x], g[y]):
                return CheckResult(False, Witness("monotone", (
                    ("x", x, "source"), ("y", y, "source"))))
    for x in range(xs.size):
        reach = f.image(xs.up[x])
        missing = ys.up[g[x]] & ~reach
        if missing:
            return CheckResult(False, Witness("back", (
                ("x", x, "source"), ("y′", next(bits(missing)), "target"))))
    return CheckResult(True)


def check_downset_preimage(f: StructureMap, max_points: int = 16) -> CheckResult:
    """f⁻¹(↓V) = ↓f⁻¹(V) for every subset V of the codomain (every subset
    of a finite space is clopen)."""
    xs, ys = _orders(f)
    if ys.size > max_points:
        raise BudgetExceeded(f"{ys.size} points exceed the subset budget of {max_points}")
    for v in range(1 << ys.size):
        if f.preimage(ys.downset(v)) != xs.downset(f.preimage(v)):
            return CheckResult(False, Witness("downset_preimage", (
                ("V", ExprSet(ys.size, v), "target"),)))
    return CheckResult(True)


# -- enumeration of maps ----------------------------------------------------------

MAP_KINDS = ("all", "lattice_hom", "heyting_hom", "stable", "strongly_stable")


def _hom_search(src: FiniteLattice, tgt: FiniteLattice, heyting: Optional[tuple] = None):
    n, m = src.size, tgt.size
    g = [-1] * n
    fixed = {}
    if src.bot is not None and tgt.bot is not None:
        fixed[src.bot] = tgt.bot
    if src.top is not None and tgt.top is not None:
        fixed[src.top] = tgt.top
    tables = [(src.meet, tgt.meet), (src.join, tgt.join)]
    if heyting is not None:
        tables.append(heyting)

    def consistent(i):
        # every table entry whose three indices are assigned, one of them i
        for a in range(i + 1):
            for b in range(i + 1):
                for s_tab, t_tab in tables:
                    c = s_tab[a][b]
                    if c <= i and i in (a, b, c) and g[c] != t_tab[g[a]][g[b]]:
                        return False
        return True

    def extend(i):
        if i == n:
            yield tuple(g)
            return
        choices = [fixed[i]] if i in fixed else range(m)
        for v in choices:
            g[i] = v
            if consistent(i):
                yield from extend(i + 1)
        g[i] = -1

    yield from extend(0)


def enumerate_maps(source, target, kind: str = "all", max_maps: int = 200_000) -> list[StructureMap]:
    """All total maps of the given kind, in lexicographic order of the
    mapping tuple.

    ``all``, ``stable`` and ``strongly_stable`` run through every total map and
    are bounded by ``max_maps``; the homomorphism kinds use a pruned search.
    ``stable`` kinds accept lattices, which are replaced by their filter
    logics.
    """
    if kind not in MAP_KINDS:
        raise StructureError(f"unknown map kind {kind!r}")
    n, m = structure_size(source), structure_size(target)
    if kind in ("lattice_hom", "heyting_hom"):
        s_lat, t_lat = _unwrap_lattice(source), _unwrap_lattice(target)
        heyting = None
        if kind == "heyting_hom":
            if not isinstance(source, HeytingAlgebra) or not isinstance(target, HeytingAlgebra):
                raise UniverseMismatch("heyting_hom needs Heyting algebras")
            heyting = (source.impl, target.impl)
        return [StructureMap(source, target, g) for g in _hom_search(s_lat, t_lat, heyting)]
    if m ** n > max_maps:
        raise BudgetExceeded(f"{m}^{n} maps exceed the budget of {max_maps}")
    if kind == "all":
        return [StructureMap(source, target, g) for g in product(range(m), repeat=n)]

    def as_logic(s):
        if isinstance(s, AbstractLogic):
            return s
        if isinstance(s, HeytingAlgebra):
            return heyting_to_logic(s)
        return lattice_to_logic(s)
    ls, lt = as_logic(source), as_logic(target)
    out = []
    for g in product(range(m), repeat=n):
        rep = stability_report(StructureMap(ls, lt, g))
        if rep.is_stable if kind == "stable" else rep.is_strongly_stable:
            out.append(StructureMap(source, target, g))
    return out
