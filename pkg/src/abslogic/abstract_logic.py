"""Abstract logics as intersection structures with connectives.

A logic is a finite expression universe ``range(expr_count)``, a nonempty
family of theories closed under nonempty intersection, and optional
connective tables.  Everything here works on int masks internally and hands
out :class:`~abslogic.core_order.ExprSet` values at the API boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import permutations
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .core_order import ExprSet, Table, bits, mask_of
from .errors import (
    ElementInTheory,
    EmptyTheoryFamily,
    IndexOutOfRange,
    MalformedTable,
    MissingConnective,
    NotATheory,
    NotDisjoint,
    NotDisjunctionClosed,
    NotDistributiveLogic,
    NotIntersectionClosed,
    NoWitness,
    StructureError,
)

SetLike = Union[ExprSet, Iterable[int]]


@dataclass(frozen=True)
class AbstractLogic:
    """Validated on construction: theories nonempty and closed under
    (pairwise, hence all nonempty finite) intersection; tables total.

    ``theories`` is normalized to a deduplicated tuple sorted by mask.
    """

    expr_count: int
    theories: tuple[ExprSet, ...]
    join: Optional[Table] = None
    meet: Optional[Table] = None
    impl: Optional[Table] = None
    neg: Optional[tuple[int, ...]] = None
    bot: Optional[int] = None
    top: Optional[int] = None
    names: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        n = self.expr_count
        if n < 0:
            raise StructureError("expr_count must be >= 0")
        fam = []
        for t in self.theories:
            if not isinstance(t, ExprSet):
                t = ExprSet.of(n, t)
            elif t.universe_size != n:
                raise StructureError(f"theory {t} is over a universe of the wrong size")
            fam.append(t)
        fam = sorted(set(fam), key=lambda s: s.mask)
        object.__setattr__(self, "theories", tuple(fam))
        if not fam:
            raise EmptyTheoryFamily()
        for name in ("join", "meet", "impl"):
            table = getattr(self, name)
            if table is not None:
                table = tuple(tuple(row) for row in table)
                if len(table) != n or any(len(row) != n for row in table):
                    raise MalformedTable(f"{name} table must be {n} x {n}")
                if any(not 0 <= v < n for row in table for v in row):
                    raise MalformedTable(f"{name} table has entries outside 0..{n - 1}")
                object.__setattr__(self, name, table)
        if self.neg is not None:
            neg = tuple(self.neg)
            if len(neg) != n or any(not 0 <= v < n for v in neg):
                raise MalformedTable("neg table must map 0..n-1 into 0..n-1")
            object.__setattr__(self, "neg", neg)
        for name in ("bot", "top"):
            v = getattr(self, name)
            if v is not None and not 0 <= v < n:
                raise IndexOutOfRange(v, n)
        if self.names is not None:
            if len(self.names) != n:
                raise StructureError("one name per expression required")
            object.__setattr__(self, "names", tuple(self.names))
        masks = [t.mask for t in fam]
        present = set(masks)
        for i, u in enumerate(masks):
            for v in masks[i + 1:]:
                if u & v not in present:
                    raise NotIntersectionClosed((fam[i], ExprSet(n, v)))

    # -- cached views ---------------------------------------------------------

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.expr_count) - 1

    @cached_property
    def theory_masks(self) -> tuple[int, ...]:
        return tuple(t.mask for t in self.theories)

    @cached_property
    def theory_mask_set(self) -> frozenset:
        return frozenset(self.theory_masks)

    @cached_property
    def prime_masks(self) -> tuple[int, ...]:
        """Finite-family primes: not the intersection of two strictly larger
        theories (finite meets reduce to binary ones)."""
        ths = self.theory_masks
        out = []
        for t in ths:
            above = [u for u in ths if u != t and u & t == t]
            split = any(u & v == t for i, u in enumerate(above) for v in above[i + 1:])
            if not split:
                out.append(t)
        return tuple(out)

    @cached_property
    def totally_prime_masks(self) -> tuple[int, ...]:
        """Arbitrary-family primes: differs from the intersection of *all*
        strictly larger theories (or has none above it)."""
        ths = self.theory_masks
        out = []
        for t in ths:
            meet = self.full_mask
            found = False
            for u in ths:
                if u != t and u & t == t:
                    meet &= u
                    found = True
            if not found or meet != t:
                out.append(t)
        return tuple(out)

    @cached_property
    def maximal_masks(self) -> tuple[int, ...]:
        ths = self.theory_masks
        return tuple(t for t in ths if not any(u != t and u & t == t for u in ths))

    @cached_property
    def s_sets(self) -> tuple[int, ...]:
        """For each expression ``a``, the mask over ``prime_masks`` of the
        primes containing ``a``."""
        primes = self.prime_masks
        return tuple(mask_of(k for k, p in enumerate(primes) if p >> a & 1)
                     for a in range(self.expr_count))

    @cached_property
    def negation(self) -> Optional[tuple[int, ...]]:
        """Stored negation, or ``a -> bot`` when only implication and bottom
        are present."""
        if self.neg is not None:
            return self.neg
        if self.impl is not None and self.bot is not None:
            return tuple(self.impl[a][self.bot] for a in range(self.expr_count))
        return None

    @cached_property
    def classification(self) -> "LogicClass":
        return classify_logic(self)

    @property
    def regular(self) -> bool:
        return self.full_mask not in self.theory_mask_set

    def name(self, i: int) -> str:
        return self.names[i] if self.names is not None else str(i)

    def expr_set(self, s: SetLike) -> ExprSet:
        if isinstance(s, ExprSet):
            if s.universe_size != self.expr_count:
                raise StructureError("set is over a universe of the wrong size")
            return s
        return ExprSet.of(self.expr_count, s)

    def with_connectives(self, **tables) -> "AbstractLogic":
        return replace(self, **tables)


def validate_logic(expr_count: int, theories: Iterable[SetLike], *,
                   join=None, meet=None, impl=None, neg=None, bot=None, top=None,
                   names: Optional[Sequence[str]] = None) -> AbstractLogic:
    """Build an :class:`AbstractLogic` from raw data.  A family that is not
    intersection-closed is rejected, never repaired."""
    fam = [t if isinstance(t, ExprSet) else ExprSet.of(expr_count, t) for t in theories]
    return AbstractLogic(expr_count, tuple(fam), join, meet, impl, neg, bot, top,
                         tuple(names) if names is not None else None)


# -- consequence ---------------------------------------------------------------

def _closure_mask(logic: AbstractLogic, a: int) -> tuple[int, bool]:
    out = logic.full_mask
    consistent = False
    for t in logic.theory_masks:
        if a & ~t == 0:
            out &= t
            consistent = True
    return out, consistent


def closure(logic: AbstractLogic, A: SetLike) -> tuple[ExprSet, bool]:
    """Least theory containing ``A`` and whether ``A`` is consistent.

    An inconsistent set (contained in no theory) closes to the whole
    expression set, the intersection of the empty family.
    """
    A = logic.expr_set(A)
    m, ok = _closure_mask(logic, A.mask)
    return ExprSet(logic.expr_count, m), ok


def entails(logic: AbstractLogic, A: SetLike, a: int) -> bool:
    """``A |- a``: ``a`` lies in every theory containing ``A``."""
    m, _ = _closure_mask(logic, logic.expr_set(A).mask)
    return bool(m >> a & 1)


def is_theory(logic: AbstractLogic, T: SetLike) -> bool:
    T = logic.expr_set(T)
    member = T.mask in logic.theory_mask_set
    m, ok = _closure_mask(logic, T.mask)
    assert member == (ok and m == T.mask), "theory membership disagrees with closure"
    return member


# -- theory hierarchy ------------------------------------------------------------

@dataclass(frozen=True)
class TheoryReport:
    prime: tuple[ExprSet, ...]
    totally_prime: tuple[ExprSet, ...]
    maximal: tuple[ExprSet, ...]
    complete: tuple[ExprSet, ...]


def _complete_masks(logic: AbstractLogic) -> tuple[int, ...]:
    # Conditions (a), (b) checked at each theory, (d) against the primes above.
    n = logic.expr_count
    join, meet, impl = logic.join, logic.meet, logic.impl
    primes = logic.prime_masks
    out = []
    for t in logic.theory_masks:
        ok = True
        if join is not None:
            ok = all(bool(t >> join[a][b] & 1) == bool(t >> a & 1 or t >> b & 1)
                     for a in range(n) for b in range(n))
        if ok and meet is not None:
            ok = all(bool(t >> meet[a][b] & 1) == bool(t >> a & 1 and t >> b & 1)
                     for a in range(n) for b in range(n))
        if ok and impl is not None:
            above = [p for p in primes if p & t == t]
            for a in range(n):
                for b in range(n):
                    rhs = all(not p >> a & 1 or p >> b & 1 for p in above)
                    if bool(t >> impl[a][b] & 1) != rhs:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            out.append(t)
    return tuple(out)


def theory_report(logic: AbstractLogic) -> TheoryReport:
    """Prime, totally prime, maximal and complete theories.

    Prime and totally prime come from separate computations; on a finite
    universe they always agree, which the test suite checks rather than
    assumes.
    """
    n = logic.expr_count
    wrap = lambda ms: tuple(ExprSet(n, m) for m in ms)
    return TheoryReport(prime=wrap(logic.prime_masks),
                        totally_prime=wrap(logic.totally_prime_masks),
                        maximal=wrap(logic.maximal_masks),
                        complete=wrap(_complete_masks(logic)))


class GeneratorReport(NamedTuple):
    is_min_generated: bool
    minimal_generator: list


def generator_report(logic: AbstractLogic) -> GeneratorReport:
    """Whether every theory is a nonempty intersection of totally prime
    theories; the totally prime list is then the minimal generator set."""
    tpt = logic.totally_prime_masks
    ok = True
    for t in logic.theory_masks:
        above = [p for p in tpt if p & t == t]
        m = logic.full_mask
        for p in above:
            m &= p
        if not above or m != t:
            ok = False
            break
    n = logic.expr_count
    return GeneratorReport(ok, [ExprSet(n, p) for p in tpt] if ok else [])


# -- classification --------------------------------------------------------------

@dataclass(frozen=True)
class LogicClass:
    regular: bool
    closed_under_chain_unions: bool
    distributive: bool
    bounded: bool
    intuitionistic: bool
    classical: bool

    def __post_init__(self):
        if self.intuitionistic and not (self.distributive and self.bounded):
            raise StructureError("intuitionistic implies distributive and bounded")
        if self.classical and not self.intuitionistic:
            raise StructureError("classical implies intuitionistic")


def _join_condition(logic, tpt):
    n, join = logic.expr_count, logic.join
    for t in tpt:
        for a in range(n):
            ta = t >> a & 1
            row = join[a]
            for b in range(n):
                if bool(t >> row[b] & 1) != bool(ta or t >> b & 1):
                    return False
    return True


def _meet_condition(logic, tpt):
    n, meet = logic.expr_count, logic.meet
    for t in tpt:
        for a in range(n):
            ta = t >> a & 1
            row = meet[a]
            for b in range(n):
                if bool(t >> row[b] & 1) != bool(ta and t >> b & 1):
                    return False
    return True


def _negation_condition(logic, tpt, neg):
    ths = logic.theory_masks
    for t in tpt:
        for a in range(logic.expr_count):
            inconsistent = not any((t | 1 << a) & ~u == 0 for u in ths)
            if bool(t >> neg[a] & 1) != inconsistent:
                return False
    return True


def _implication_condition(logic, tpt):
    n, impl = logic.expr_count, logic.impl
    for t in tpt:
        above = [u for u in tpt if u & t == t]
        for a in range(n):
            row = impl[a]
            with_a = [u for u in above if u >> a & 1]
            for b in range(n):
                rhs = all(u >> b & 1 for u in with_a)
                if bool(t >> row[b] & 1) != rhs:
                    return False
    return True


def _chains_closed(logic):
    # The union of a finite chain is an iterated union of comparable pairs.
    present = logic.theory_mask_set
    ths = logic.theory_masks
    return all(u | v in present for u in ths for v in ths if u & v in (u, v))


def classify_logic(logic: AbstractLogic) -> LogicClass:
    """Connective conditions evaluated over the totally prime theories."""
    tpt = logic.totally_prime_masks
    distributive = (logic.join is not None and logic.meet is not None
                    and _join_condition(logic, tpt) and _meet_condition(logic, tpt))
    bounded = (distributive and logic.bot is not None and logic.top is not None
               and all(t >> logic.top & 1 and not t >> logic.bot & 1 for t in tpt))
    neg = logic.negation
    intuitionistic = (bounded and logic.impl is not None and neg is not None
                      and _negation_condition(logic, tpt, neg)
                      and _implication_condition(logic, tpt))
    classical = intuitionistic and set(logic.maximal_masks) == set(tpt)
    return LogicClass(regular=logic.regular,
                      closed_under_chain_unions=_chains_closed(logic),
                      distributive=distributive, bounded=bounded,
                      intuitionistic=intuitionistic, classical=classical)


# -- disjunction and prime separation --------------------------------------------------

def _fold_join(join, order):
    acc = order[0]
    for x in order[1:]:
        acc = join[acc][x]
    return acc


def check_disjunction(logic: AbstractLogic, A: SetLike) -> bool:
    """``A`` meets a totally prime theory iff the iterated join of ``A`` lies
    in it.  The join is folded in ascending order; other fold orders must give
    an expression in exactly the same totally prime theories, otherwise the
    disjunction of ``A`` is not well defined and the check fails."""
    if logic.join is None:
        raise MissingConnective("join")
    A = logic.expr_set(A)
    elems = list(A.members)
    if not elems:
        raise StructureError("disjunction needs a nonempty set")
    tpt = logic.totally_prime_masks
    v = _fold_join(logic.join, elems)
    if len(elems) <= 5:
        orders = permutations(elems)
    else:
        orders = [elems[::-1], elems[1:] + elems[:1]]
    sig = lambda x: tuple(t >> x & 1 for t in tpt)
    base = sig(v)
    if any(sig(_fold_join(logic.join, list(o))) != base for o in orders):
        return False
    return all(bool(A.mask & t) == bool(t >> v & 1) for t in tpt)


def disjunction_closure_witness(logic: AbstractLogic, S: int) -> Optional[tuple[int, int]]:
    join = logic.join
    for a in bits(S):
        for b in bits(S):
            if not S >> join[a][b] & 1:
                return (a, b)
    return None


def prime_separation(logic: AbstractLogic, T: SetLike, S: SetLike) -> ExprSet:
    """Least prime theory (canonical order) containing ``T`` and missing ``S``.

    ``T`` must be a theory, ``S`` nonempty, closed under join and disjoint
    from ``T``, and the logic distributive.
    """
    T, S = logic.expr_set(T), logic.expr_set(S)
    if T.mask not in logic.theory_mask_set:
        raise NotATheory(T)
    if not S.mask:
        raise StructureError("the avoided set must be nonempty")
    if logic.join is None:
        raise MissingConnective("join")
    w = disjunction_closure_witness(logic, S.mask)
    if w is not None:
        raise NotDisjunctionClosed(*w)
    if T.mask & S.mask:
        raise NotDisjoint(next(bits(T.mask & S.mask)))
    if not logic.classification.distributive:
        raise NotDistributiveLogic()
    for p in logic.prime_masks:
        if p & T.mask == T.mask and not p & S.mask:
            return ExprSet(logic.expr_count, p)
    raise NoWitness(T, S)


def prime_extension_avoiding(logic: AbstractLogic, T: SetLike, a: int) -> ExprSet:
    """Prime theory extending ``T`` that omits ``a``, separating ``T`` from
    the set of expressions entailing ``a``."""
    T = logic.expr_set(T)
    if not 0 <= a < logic.expr_count:
        raise IndexOutOfRange(a, logic.expr_count)
    if a in T:
        raise ElementInTheory(a)
    S = [b for b in range(logic.expr_count) if _closure_mask(logic, 1 << b)[0] >> a & 1]
    return prime_separation(logic, T, S)
