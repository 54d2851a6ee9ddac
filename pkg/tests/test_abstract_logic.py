import pytest
from hypothesis import given, strategies as st

from abslogic.abstract_logic import (
    check_disjunction,
    classify_logic,
    closure,
    entails,
    generator_report,
    is_theory,
    prime_extension_avoiding,
    prime_separation,
    theory_report,
    validate_logic,
)
from abslogic.core_order import ExprSet, chain_lattice, diamond, heyting_implication
from abslogic.duality import heyting_to_logic, lattice_to_logic
from abslogic.enumeration import enumerate_closure_systems, enumerate_filter_logics
from abslogic.errors import (
    ElementInTheory,
    EmptyTheoryFamily,
    MalformedTable,
    NotDisjoint,
    NotDisjunctionClosed,
    NotIntersectionClosed,
)

import oracles


def chain3():
    return lattice_to_logic(chain_lattice(3))


def chain3_heyting():
    return heyting_to_logic(heyting_implication(chain_lattice(3)))


def diamond_logic():
    return lattice_to_logic(diamond())


def masks(sets):
    return [s.mask for s in sets]


SMALL_FILTER_LOGICS = enumerate_filter_logics(16, heyting=True)
CLOSURE_SYSTEMS = enumerate_closure_systems(3)


# -- validate_logic -----------------------------------------------------------------

def test_single_theory_family_is_valid():
    logic = validate_logic(2, [[1]])
    assert [set(t) for t in logic.theories] == [{1}]


def test_disjoint_pair_is_not_intersection_closed():
    with pytest.raises(NotIntersectionClosed) as exc:
        validate_logic(2, [[0], [1]])
    assert {frozenset(s) for s in exc.value.witness} == {frozenset({0}), frozenset({1})}


def test_three_chain_filters_are_a_logic():
    assert [set(t) for t in validate_logic(3, [[2], [1, 2]]).theories] == [{2}, {1, 2}]


def test_empty_family_rejected():
    with pytest.raises(EmptyTheoryFamily):
        validate_logic(2, [])


def test_partial_table_rejected():
    with pytest.raises(MalformedTable):
        validate_logic(2, [[1]], join=((0, 1),))


def test_theories_are_deduplicated_and_sorted():
    logic = validate_logic(3, [[1, 2], [2], [2]])
    assert [t.mask for t in logic.theories] == [4, 6]


# -- closure and entailment --------------------------------------------------------------

def test_closure_of_top_is_itself():
    c, ok = closure(chain3(), [2])
    assert set(c) == {2} and ok


def test_closure_of_bottom_is_inconsistent():
    c, ok = closure(chain3(), [0])
    assert set(c) == {0, 1, 2} and not ok


def test_closure_of_empty_set_is_least_theory():
    for logic in (chain3(), diamond_logic()):
        c, ok = closure(logic, [])
        least = logic.full_mask
        for t in logic.theory_masks:
            least &= t
        assert c.mask == least and ok


def test_entailment_follows_order():
    logic = chain3()
    assert entails(logic, [1], 2)
    assert not entails(logic, [2], 1)


# -- is_theory ---------------------------------------------------------------------------

def test_is_theory_examples():
    logic = chain3()
    assert is_theory(logic, [1, 2])
    assert not is_theory(logic, [1])
    assert logic.regular and not is_theory(logic, [0, 1, 2])


@pytest.mark.parametrize("logic", CLOSURE_SYSTEMS + SMALL_FILTER_LOGICS[:20])
def test_theories_are_exactly_the_consistent_closed_sets(logic):
    n = logic.expr_count
    for m in range(1 << n):
        c, ok = closure(logic, ExprSet(n, m))
        assert (m in logic.theory_mask_set) == (ok and c.mask == m)
        assert is_theory(logic, ExprSet(n, m)) == (m in logic.theory_mask_set)


# -- theory hierarchy ------------------------------------------------------------------------

def test_three_chain_report():
    rep = theory_report(chain3())
    assert [set(t) for t in rep.prime] == [{2}, {1, 2}]
    assert rep.totally_prime == rep.prime
    assert [set(t) for t in rep.maximal] == [{1, 2}]


def test_diamond_report():
    rep = theory_report(diamond_logic())
    assert [set(t) for t in rep.prime] == [{1, 3}, {2, 3}]
    assert {3} not in [set(t) for t in rep.prime]


def test_single_theory_report():
    rep = theory_report(validate_logic(2, [[1]]))
    assert [set(t) for t in rep.prime] == [{1}]
    assert rep.prime == rep.totally_prime == rep.maximal


@pytest.mark.parametrize("logic", CLOSURE_SYSTEMS + SMALL_FILTER_LOGICS)
def test_prime_lists_match_subfamily_oracle(logic):
    rep = theory_report(logic)
    ref = oracles.brute_primes([set(t) for t in logic.theories])
    assert sorted(map(sorted, (set(t) for t in rep.totally_prime))) == sorted(map(sorted, ref))
    assert rep.prime == rep.totally_prime
    assert set(masks(rep.maximal)) <= set(masks(rep.totally_prime)) <= set(masks(rep.prime))


# -- generator_report ---------------------------------------------------------------------

def test_diamond_generated_by_its_primes():
    ok, gen = generator_report(diamond_logic())
    assert ok and [set(t) for t in gen] == [{1, 3}, {2, 3}]


def test_three_chain_generated_by_its_primes():
    ok, gen = generator_report(chain3())
    assert ok and [set(t) for t in gen] == [{2}, {1, 2}]


def test_powerset_family_generation():
    logic = validate_logic(2, [[], [0], [1], [0, 1]])
    ok, gen = generator_report(logic)
    assert ok
    assert [set(t) for t in gen] == [{0}, {1}, {0, 1}]


@pytest.mark.parametrize("logic", CLOSURE_SYSTEMS)
def test_every_finite_family_is_min_generated(logic):
    ok, gen = generator_report(logic)
    assert ok
    for t in logic.theory_masks:
        above = [g.mask for g in gen if g.mask & t == t]
        m = logic.full_mask
        for g in above:
            m &= g
        assert above and m == t


# -- classification ------------------------------------------------------------------------

def test_diamond_with_lattice_tables_is_distributive_and_bounded():
    cls = classify_logic(diamond_logic())
    assert cls.distributive and cls.bounded and not cls.intuitionistic


def test_boolean_diamond_is_classical():
    cls = classify_logic(heyting_to_logic(heyting_implication(diamond())))
    assert cls.intuitionistic and cls.classical


def test_three_chain_heyting_is_intuitionistic_not_classical():
    cls = classify_logic(chain3_heyting())
    assert cls.intuitionistic and not cls.classical


def test_connective_free_logic_is_not_distributive():
    cls = classify_logic(validate_logic(2, [[1]]))
    assert cls.regular and not cls.distributive


def test_wrong_join_table_breaks_distributivity():
    logic = chain3()
    bad = tuple(tuple(min(a, b) for b in range(3)) for a in range(3))
    assert not classify_logic(logic.with_connectives(join=bad)).distributive


@pytest.mark.parametrize("logic", enumerate_filter_logics(32))
def test_filter_logics_are_distributive_and_bounded(logic):
    cls = classify_logic(logic)
    assert cls.distributive and cls.bounded


# -- connective facts on theories ---------------------------------------------------------------

@pytest.mark.parametrize("logic", SMALL_FILTER_LOGICS)
def test_connective_facts_on_theories(logic):
    n = logic.expr_count
    meet, join, impl = logic.meet, logic.join, logic.impl
    primes = logic.prime_masks
    for t in logic.theory_masks:
        inside = lambda x: bool(t >> x & 1)
        is_prime = t in primes
        for a in range(n):
            for b in range(n):
                assert (inside(a) and inside(b)) == inside(meet[a][b])
                if inside(a) or inside(b):
                    assert inside(join[a][b])
                if is_prime and inside(join[a][b]):
                    assert inside(a) or inside(b)
                if inside(a) and inside(impl[a][b]):
                    assert inside(b)
                if is_prime:
                    above = [q for q in primes if q & t == t]
                    rhs = all(q >> b & 1 for q in above if q >> a & 1)
                    assert inside(impl[a][b]) == rhs


@pytest.mark.parametrize("logic", SMALL_FILTER_LOGICS)
def test_every_theory_is_an_intersection_of_primes(logic):
    for t in logic.theory_masks:
        m = logic.full_mask
        for p in logic.prime_masks:
            if p & t == t:
                m &= p
        assert m == t


# -- disjunction --------------------------------------------------------------------------------

def test_diamond_atoms_disjunction():
    assert check_disjunction(diamond_logic(), [1, 2])


def test_singleton_disjunction():
    for logic in (chain3(), diamond_logic()):
        for a in range(logic.expr_count):
            assert check_disjunction(logic, [a])


def test_chain_bottom_and_middle_disjunction():
    assert check_disjunction(chain3(), [0, 1])


@pytest.mark.parametrize("logic", [g for g in SMALL_FILTER_LOGICS if g.expr_count <= 12])
def test_disjunction_holds_for_all_subsets_of_filter_logics(logic):
    n = logic.expr_count
    for m in range(1, 1 << n):
        assert check_disjunction(logic, ExprSet(n, m))


# -- prime separation ------------------------------------------------------------------------

def test_separation_in_three_chain():
    assert set(prime_separation(chain3(), [2], [1])) == {2}


def test_separation_in_diamond():
    assert set(prime_separation(diamond_logic(), [3], [1])) == {2, 3}


def test_separation_needs_disjoint_sets():
    with pytest.raises(NotDisjoint):
        prime_separation(chain3(), [2], [2])


def test_separation_needs_disjunction_closed_set():
    with pytest.raises(NotDisjunctionClosed):
        prime_separation(diamond_logic(), [3], [1, 2])


def test_extension_avoiding_examples():
    assert set(prime_extension_avoiding(chain3(), [2], 1)) == {2}
    assert set(prime_extension_avoiding(diamond_logic(), [3], 1)) == {2, 3}
    with pytest.raises(ElementInTheory):
        prime_extension_avoiding(chain3(), [1, 2], 1)


@given(st.sampled_from(SMALL_FILTER_LOGICS), st.data())
def test_extension_avoiding_is_prime_and_avoids(logic, data):
    t = data.draw(st.sampled_from(logic.theory_masks))
    outside = [a for a in range(logic.expr_count) if not t >> a & 1]
    a = data.draw(st.sampled_from(outside))
    p = prime_extension_avoiding(logic, ExprSet(logic.expr_count, t), a)
    assert p.mask in logic.prime_masks and p.mask & t == t and a not in p
