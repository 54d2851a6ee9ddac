"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py`` (or
``python3 tests/test_acceptance.py``); the lines are repeated in the
"acceptance criteria" section of the pytest summary.
"""
import io
import random
import time
from itertools import product

import pytest

from abslogic.abstract_logic import (
    closure,
    prime_separation,
    theory_report,
    validate_logic,
)
from abslogic.cli import run_command
from abslogic.core_order import ExprSet, chain_lattice, heyting_implication, m3, upset_lattice
from abslogic.duality import (
    dual_space,
    heyting_to_logic,
    lattice_to_logic,
    logic_to_lattice,
    roundtrip_lattice,
    roundtrip_logic,
)
from abslogic.enumeration import (
    canonical_iso_class,
    enumerate_closure_systems,
    enumerate_distributive_lattices,
    enumerate_heyting_algebras,
    enumerate_posets,
)
from abslogic.errors import NotHeyting, NotIntersectionClosed, NoWitness
from abslogic.morphisms import (
    StructureMap,
    correspondence_check,
    dualize_map,
    enumerate_maps,
    is_esakia_morphism,
    is_heyting_hom,
    is_lattice_hom,
    stability_report,
)

import oracles

LATTICES = enumerate_distributive_lattices(32)


def join_closed_subsets(n, join):
    """Every join-closed subset of ``range(n)`` (including the empty set), in
    lectic order, by the next-closure algorithm."""
    def close(m):
        while True:
            add = 0
            for a in range(n):
                if m >> a & 1:
                    for b in range(a + 1, n):
                        if m >> b & 1:
                            add |= 1 << join[a][b]
            if not add & ~m:
                return m
            m |= add

    out = []
    cur = close(0)
    while True:
        out.append(cur)
        for i in range(n - 1, -1, -1):
            if cur >> i & 1:
                cur &= ~(1 << i)
                continue
            nxt = close(cur | 1 << i)
            if not nxt & ((1 << i) - 1) & ~cur:
                cur = nxt
                break
        else:
            return out


def _join_closure(n, join, m):
    while True:
        add = 0
        for a in range(n):
            if m >> a & 1:
                for b in range(n):
                    if m >> b & 1:
                        add |= 1 << join[a][b]
        if not add & ~m:
            return m
        m |= add


def sampled_join_closed_subsets(n, join, count, seed=0):
    """Join closures of every subset with at most three elements, plus
    ``count`` join closures of random subsets of up to six elements."""
    rng = random.Random(seed)
    out = {0}
    for a in range(n):
        for b in range(a, n):
            for c in range(b, n):
                out.add(_join_closure(n, join, 1 << a | 1 << b | 1 << c))
    for _ in range(count):
        k = rng.randint(1, 6)
        out.add(_join_closure(n, join, sum(1 << x for x in rng.sample(range(n), k))))
    return sorted(out)


# -- 1 -------------------------------------------------------------------------------------

def test_criterion_1_birkhoff_priestley_round_trip(criterion):
    with criterion(1, "Birkhoff/Priestley round trip, all posets up to 5 points") as c:
        start = time.perf_counter()
        failures = []
        count = 0
        for n in range(1, 6):
            for p in enumerate_posets(n):
                count += 1
                lat = upset_lattice(p)
                x = dual_space(lat)
                if not oracles.order_isomorphic(p.size, p.relation, x.size, x.order.relation):
                    failures.append(("order", p.up))
                if canonical_iso_class(x.order) != canonical_iso_class(p):
                    failures.append(("key", p.up))
                try:
                    roundtrip_lattice(lat)
                except Exception as exc:
                    failures.append(("roundtrip", p.up, exc))
        elapsed = time.perf_counter() - start
        c.detail = f"{count} posets, {len(failures)} failures"
        assert count == 87
        assert failures == []
        assert elapsed < 60


# -- 2 -------------------------------------------------------------------------------------

def test_criterion_2_logic_round_trip(criterion):
    with criterion(2, "lattice -> logic -> lattice and exact theory match") as c:
        failures = []
        for lat in LATTICES:
            logic = lattice_to_logic(lat)
            q = logic_to_lattice(logic)
            co = q.class_of
            iso = (sorted(co) == list(range(lat.size))
                   and all(lat.leq(a, b) == q.lattice.leq(co[a], co[b])
                           for a, b in product(range(lat.size), repeat=2)))
            same_key = canonical_iso_class(q.lattice) == canonical_iso_class(lat)
            rt = roundtrip_logic(logic)
            family = [t.mask for t, _ in rt.theory_map] == [u.mask for _, u in rt.theory_map]
            if not (iso and same_key and rt.exact and family):
                failures.append(lat.size)
        c.detail = f"{len(LATTICES)} lattices (carrier <= 32), {len(failures)} failures"
        assert failures == []


# -- 3 -------------------------------------------------------------------------------------

EXHAUSTIVE_CARRIER = 24


def test_criterion_3_prime_separation_totality(criterion):
    with criterion(3, "prime separation never fails") as c:
        pairs = 0
        failures = []
        sampled = []
        for lat in LATTICES:
            logic = lattice_to_logic(lat)
            n = lat.size
            le = oracles.leq_pairs(lat)
            primes = [sum(1 << i for i in s) for s in oracles.brute_prime_filters(n, le)]
            if n <= EXHAUSTIVE_CARRIER:
                family = join_closed_subsets(n, lat.join)
            else:
                family = sampled_join_closed_subsets(n, lat.join, 3000)
                sampled.append(n)
            for s in family:
                if not s:
                    continue
                for t in logic.theory_masks:
                    if t & s:
                        continue
                    pairs += 1
                    expected = any(p & t == t and not p & s for p in primes)
                    try:
                        got = prime_separation(logic, ExprSet(n, t), ExprSet(n, s)).mask
                    except NoWitness:
                        failures.append((n, t, s, "NoWitness"))
                        continue
                    if not expected or got not in primes or got & t != t or got & s:
                        failures.append((n, t, s, got))
        c.detail = (f"{pairs} (T, S) pairs, exhaustive for carriers <= {EXHAUSTIVE_CARRIER}, "
                    f"sampled S for carriers {sampled}, {len(failures)} failures")
        assert failures == []


# -- 4 -------------------------------------------------------------------------------------

def test_criterion_4_adjunction_and_esakia_identity(criterion):
    with criterion(4, "adjunction and Esakia identity on every Heyting algebra") as c:
        algebras = enumerate_heyting_algebras(32)
        failures = []
        for h in algebras:
            lat = h.lattice
            n = lat.size
            for z, a, b in product(range(n), repeat=3):
                if lat.leq(z, h.impl[a][b]) != lat.leq(lat.meet[z][a], b):
                    failures.append(("adjunction", n, z, a, b))
            x = dual_space(h, "esakia")
            pts = range(x.size)
            for a, b in product(range(n), repeat=2):
                sa = set(x.basic_opens[a])
                sb = set(x.basic_opens[b])
                lhs = {k for k in pts if any(x.order.leq(k, j) for j in sa - sb)}
                rhs = set(pts) - set(x.basic_opens[h.impl[a][b]])
                if lhs != rhs:
                    failures.append(("esakia", n, a, b))
        c.detail = f"{len(algebras)} algebras, {len(failures)} failures"
        assert failures == []


# -- 5 -------------------------------------------------------------------------------------

def test_criterion_5_morphism_correspondence(criterion):
    with criterion(5, "stable <=> lattice hom, strongly stable <=> Heyting hom") as c:
        algebras = enumerate_heyting_algebras(5)
        logics = [heyting_to_logic(h) for h in algebras]
        maps = 0
        failures = []
        for (hs, ls), (ht, lt) in product(zip(algebras, logics), repeat=2):
            for g in product(range(ht.size), repeat=hs.size):
                maps += 1
                rep = stability_report(StructureMap(ls, lt, g))
                f = StructureMap(hs, ht, g)
                lat_hom = bool(is_lattice_hom(f))
                heyt_hom = bool(is_heyting_hom(f))
                if rep.is_stable != lat_hom or rep.is_strongly_stable != heyt_hom:
                    failures.append((hs.size, ht.size, g))

        h2, h3 = heyting_implication(chain_lattice(2)), heyting_implication(chain_lattice(3))
        l2, l3 = heyting_to_logic(h2), heyting_to_logic(h3)
        h_rep = stability_report(StructureMap(l2, l3, (0, 2)))
        h_corr = correspondence_check(StructureMap(h2, h3, (0, 2)))
        g_rep = stability_report(StructureMap(l3, l2, (0, 0, 1)))
        g_corr = correspondence_check(StructureMap(h3, h2, (0, 0, 1)))
        witnesses_ok = (
            h_rep.is_logic_application and h_rep.is_stable and h_rep.is_strongly_stable
            and (h_corr.lattice_hom, h_corr.heyting_hom) == (True, True)
            and g_rep.is_stable and not g_rep.is_strongly_stable
            and (g_corr.lattice_hom, g_corr.heyting_hom) == (True, False)
            and [(lbl, v.mask) for lbl, v, _ in g_rep.witnesses["strongly_stable"].items]
            == [("P′", 0b10), ("P", 0b110)]
            and h_corr.consistent and g_corr.consistent)
        c.detail = f"{maps} maps, {len(failures)} failures, designated h and g reproduced: {witnesses_ok}"
        assert failures == []
        assert witnesses_ok


# -- 6 -------------------------------------------------------------------------------------

def test_criterion_6_esakia_duality_on_morphisms(criterion):
    with criterion(6, "dual maps of Heyting homs are Esakia morphisms; contravariance") as c:
        algebras = enumerate_heyting_algebras(8)
        homs = {}
        for i, j in product(range(len(algebras)), repeat=2):
            homs[i, j] = enumerate_maps(algebras[i], algebras[j], "lattice_hom")
        dual = {}
        heyt = lat_only = 0
        failures = []
        for (i, j), fs in homs.items():
            for f in fs:
                if is_heyting_hom(f):
                    heyt += 1
                    d = dualize_map(f, "esakia")
                    if not is_esakia_morphism(d):
                        failures.append(("heyting", i, j, f.mapping))
                else:
                    lat_only += 1
                    d = dualize_map(f, "priestley")
                    if is_esakia_morphism(d):
                        failures.append(("lattice", i, j, f.mapping))
                dual[i, j, f.mapping] = d.mapping
        # composites of homs are homs again, so dual(g . f) is already in the table;
        # 73M pairs at carrier 8 is out of reach, carrier <= 6 gives every pair there
        small = [i for i, h in enumerate(algebras) if h.size <= 6]
        pairs = 0
        for i, j, k in product(small, repeat=3):
            for f in homs[i, j]:
                df = dual[i, j, f.mapping]
                for g in homs[j, k]:
                    pairs += 1
                    gf = tuple(g.mapping[x] for x in f.mapping)
                    lhs = dual.get((i, k, gf))
                    dg = dual[j, k, g.mapping]
                    if lhs is None or lhs != tuple(df[y] for y in dg):
                        failures.append(("functor", i, j, k, f.mapping, g.mapping))
        c.detail = (f"{heyt} Heyting homs, {lat_only} lattice-only homs over {len(algebras)} "
                    f"algebras (carrier <= 8); {pairs} composable pairs (carrier <= 6); "
                    f"{len(failures)} failures")
        assert failures == []


# -- 7 -------------------------------------------------------------------------------------

def _hierarchy_failures(logic):
    out = []
    rep = theory_report(logic)
    pm = [t.mask for t in rep.prime]
    tpm = [t.mask for t in rep.totally_prime]
    mx = [t.mask for t in rep.maximal]
    if not set(mx) <= set(tpm) <= set(pm):
        out.append("inclusions")
    if pm != tpm:
        out.append("finite collapse")
    ref = sorted(sum(1 << i for i in s) for s in oracles.brute_primes(
        [set(t) for t in logic.theories]))
    if sorted(pm) != ref:
        out.append("prime oracle")
    for t in logic.theory_masks:
        m = logic.full_mask
        for p in pm:
            if p & t == t:
                m &= p
        if m != t:
            out.append("intersection of primes")
    n = logic.expr_count
    if n <= 12:
        for s in range(1 << n):
            c, ok = closure(logic, ExprSet(n, s))
            if (s in logic.theory_mask_set) != (ok and c.mask == s):
                out.append("closure characterization")
    return out


def _connective_failures(logic):
    out = []
    n = logic.expr_count
    meet, join, impl = logic.meet, logic.join, logic.impl
    primes = logic.prime_masks
    for t in logic.theory_masks:
        is_prime = t in primes
        above = [q for q in primes if q & t == t]
        for a, b in product(range(n), repeat=2):
            ia, ib = t >> a & 1, t >> b & 1
            if bool(ia and ib) != bool(t >> meet[a][b] & 1):
                out.append("(a)")
            if (ia or ib) and not t >> join[a][b] & 1:
                out.append("(b)")
            if is_prime and t >> join[a][b] & 1 and not (ia or ib):
                out.append("(b) prime")
            if ia and t >> impl[a][b] & 1 and not ib:
                out.append("(c)")
            if is_prime:
                rhs = all(q >> b & 1 for q in above if q >> a & 1)
                if bool(t >> impl[a][b] & 1) != rhs:
                    out.append("(d)")
    rep = theory_report(logic)
    if rep.complete != rep.prime:
        out.append("complete")
    return out


def test_criterion_7_theory_hierarchy_and_generation(criterion):
    with criterion(7, "theory hierarchy, generation and connective facts") as c:
        heyting_logics = [heyting_to_logic(h) for h in enumerate_heyting_algebras(32)]
        bare = enumerate_closure_systems(3)
        failures = []
        for logic in heyting_logics + bare:
            failures += [(logic.expr_count, f) for f in _hierarchy_failures(logic)]
        for logic in heyting_logics:
            failures += [(logic.expr_count, f) for f in _connective_failures(logic)]
        c.detail = (f"{len(heyting_logics)} Heyting filter logics + {len(bare)} connective-free "
                    f"closure systems, {len(failures)} failures")
        assert failures == []


# -- 8 -------------------------------------------------------------------------------------

def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    return run_command([str(a) for a in argv], out, err), out.getvalue(), err.getvalue()


def test_criterion_8_error_paths(criterion, fixtures_dir, tmp_path):
    with criterion(8, "error-path fidelity") as c:
        with pytest.raises(NotHeyting) as exc:
            heyting_implication(m3())
        m3_pair = exc.value.pair
        with pytest.raises(NotIntersectionClosed):
            validate_logic(2, [[0], [1]])
        dualize = _cli("dualize", fixtures_dir / "threechain.lattice.json", "--to", "esakia")
        roundtrip = _cli("roundtrip", fixtures_dir / "diamond.lattice.json")
        check = _cli("check-map", fixtures_dir / "g_3to2.map.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        parse = _cli("validate", bad)
        codes = (dualize[0], roundtrip[0], check[0], parse[0])
        c.detail = f"M3 witness {m3_pair}, CLI exit codes {codes}"
        assert m3_pair == (1, 2)
        assert codes == (0, 0, 1, 2)
        assert "strongly_stable: FAIL at P′={1}, P={a,1}" in check[1].splitlines()
        assert "x ↦ {{x,1}}" in roundtrip[1].splitlines()
        assert '"flavor": "esakia"' in dualize[1]
        assert parse[2].startswith("error:")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
