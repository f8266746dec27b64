import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from monoidw import catalog, green
from monoidw.errors import (
    AssocViolation,
    IdentityViolation,
    IndexOutOfRange,
    ParseError,
    SizeGuardExceeded,
)
from monoidw.monoid import (
    FiniteMonoid,
    MonoidMorphism,
    VarietyPredicate,
    check_morphism,
    direct_product,
    divides,
    find_isomorphism,
    format_monoid,
    group_of_units,
    idempotents,
    identity_morphism,
    is_aperiodic,
    is_isomorphic,
    minimal_generating_set,
    parse_monoid,
    submonoid_generated,
    subsemigroup_generated,
    transformation_monoid,
    units,
    validate_monoid,
)
from monoidw.rewriting import SemiThueSystem, quotient_monoid
from strategies import raw_tables, transformation_monoids

Z2 = catalog.cyclic_group(2)
U1 = catalog.u1()


@pytest.fixture(scope="module")
def aaa():
    """Quotient of {aaa -> a}: elements eps, a, aa at indices 0, 1, 2."""
    return quotient_monoid(SemiThueSystem.of([("aaa", "a")], "a")).monoid


class TestValidate:
    def test_trivial(self):
        m = validate_monoid([[0]], 0)
        assert m.size == 1 and m.identity == 0

    def test_z2(self):
        assert validate_monoid([[0, 1], [1, 0]], 0).size == 2

    def test_u1(self):
        m = validate_monoid([[0, 1], [1, 1]], 0)
        assert m.mul(1, 1) == 1

    def test_identity_violation(self):
        with pytest.raises(IdentityViolation):
            validate_monoid([[1, 0], [0, 1]], 0)

    def test_assoc_violation_reports_triple(self):
        table = [[0, 1, 2], [1, 2, 1], [2, 2, 2]]
        with pytest.raises(AssocViolation) as exc:
            validate_monoid(table, 0)
        i, j, k = exc.value.triple
        assert table[table[i][j]][k] != table[i][table[j][k]]

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            validate_monoid([[0, 2], [1, 0]], 0)
        with pytest.raises(IndexOutOfRange):
            validate_monoid([[0]], 1)

    def test_identity_need_not_be_zero(self):
        m = validate_monoid([[0, 0], [0, 1]], 1)
        assert m.identity == 1

    @settings(max_examples=300, deadline=None)
    @given(raw_tables())
    def test_accepts_exactly_the_associative_tables(self, raw):
        table, e = raw
        n = len(table)
        unital = all(table[e][x] == x == table[x][e] for x in range(n))
        expected = unital and oracles.is_associative(table)
        try:
            validate_monoid(table, e)
            ok = True
        except (AssocViolation, IdentityViolation):
            ok = False
        assert ok == expected


class TestGeneration:
    def test_examples(self):
        assert submonoid_generated(Z2, []) == {0}
        assert submonoid_generated(Z2, [1]) == {0, 1}
        assert submonoid_generated(U1, [1]) == {0, 1}

    def test_subsemigroup_may_omit_identity(self):
        assert subsemigroup_generated(U1, [1]) == {1}

    @settings(max_examples=50, deadline=None)
    @given(transformation_monoids(), st.data())
    def test_closure_properties(self, m, data):
        assert submonoid_generated(m, m.elements()) == frozenset(m.elements())
        gens = data.draw(st.sets(st.integers(0, m.size - 1)))
        once = submonoid_generated(m, gens)
        assert submonoid_generated(m, once) == once

    def test_minimal_generating_set_generates_and_is_minimal(self):
        for m in catalog.named_corpus().values():
            gens = minimal_generating_set(m)
            assert submonoid_generated(m, gens) == frozenset(m.elements())
            for g in gens:
                assert submonoid_generated(m, [h for h in gens if h != g]) != frozenset(m.elements())


class TestStructure:
    def test_idempotents(self, aaa):
        assert idempotents(Z2) == {0}
        assert idempotents(U1) == {0, 1}
        assert idempotents(aaa) == {0, 2}

    def test_units(self, aaa):
        assert group_of_units(Z2)[0] == {0, 1}
        assert group_of_units(U1)[0] == {0}
        u, g = group_of_units(aaa)
        assert u == {0} and g.size == 1

    def test_aperiodic(self, aaa):
        assert not is_aperiodic(Z2)
        assert is_aperiodic(catalog.trivial())
        assert not is_aperiodic(aaa)

    @settings(max_examples=60, deadline=None)
    @given(transformation_monoids())
    def test_against_oracles(self, m):
        assert idempotents(m) == oracles.idempotents(m)
        assert units(m) == oracles.units(m)
        assert is_aperiodic(m) == (not oracles.has_nontrivial_subgroup(m))
        assert is_aperiodic(m) == green.subgroups_satisfy(m, VarietyPredicate.TRIVIAL)


class TestDirectProduct:
    def test_klein(self):
        k = direct_product(Z2, Z2)
        assert k.size == 4
        assert all(k.mul(x, x) == k.identity for x in k.elements())

    def test_with_trivial(self):
        m = catalog.brandt_monoid()
        p = direct_product(m, catalog.trivial())
        assert np.array_equal(p.table, m.table) and p.identity == m.identity

    def test_u1_squared(self):
        assert len(idempotents(direct_product(U1, U1))) == 4

    def test_cap(self):
        with pytest.raises(SizeGuardExceeded):
            direct_product(Z2, Z2, cap=3)

    @settings(max_examples=30, deadline=None)
    @given(transformation_monoids(max_degree=3), transformation_monoids(max_degree=3))
    def test_idempotent_count_multiplies(self, m, n):
        assert len(idempotents(direct_product(m, n))) == len(idempotents(m)) * len(idempotents(n))


class TestDivides:
    def test_examples(self):
        assert divides(catalog.trivial(), U1)
        assert divides(Z2, catalog.klein())
        assert not divides(Z2, U1)

    def test_witness_is_a_surjective_morphism(self):
        res = divides(Z2, catalog.symmetric_group(3))
        assert res and check_morphism(res.witness) and res.witness.is_surjective()

    def test_guard(self, monkeypatch):
        t3 = catalog.full_transformation_monoid(3)
        with pytest.raises(SizeGuardExceeded):
            divides(Z2, t3)
        assert divides(Z2, t3, on_guard="unknown").divides is None
        monkeypatch.setenv("MONOIDW_SIZE_GUARD", "30")
        assert divides(Z2, t3)

    def test_reflexive_and_transitive(self):
        mons = [m for n in (1, 2, 3) for m in catalog.all_monoids(n)]
        rel = {(i, j): bool(divides(a, b)) for (i, a), (j, b) in itertools.product(enumerate(mons), repeat=2)}
        assert all(rel[i, i] for i in range(len(mons)))
        for i, j, k in itertools.product(range(len(mons)), repeat=3):
            if rel[i, j] and rel[j, k]:
                assert rel[i, k]


class TestMorphisms:
    def test_identity(self):
        assert check_morphism(identity_morphism(Z2))

    def test_to_trivial(self):
        phi = MonoidMorphism(Z2, catalog.trivial(), (0, 1), {0: 0, 1: 0})
        assert check_morphism(phi)

    def test_u1_to_z2_fails_at_zero(self):
        phi = MonoidMorphism(U1, Z2, (0, 1), {0: 0, 1: 1})
        res = check_morphism(phi)
        assert not res and res.witness == (1, 1)

    def test_isomorphism_search(self):
        assert is_isomorphic(catalog.klein(), direct_product(Z2, Z2))
        assert not is_isomorphic(catalog.klein(), catalog.cyclic_group(4))
        iso = find_isomorphism(catalog.cyclic_monoid(2, 1), catalog.cyclic_monoid(2, 1))
        assert iso is not None


class TestCatalog:
    @pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 7)])
    def test_monoid_counts(self, n, count):
        assert len(catalog.all_monoids(n)) == count

    @pytest.mark.slow
    def test_order_four(self):
        assert len(catalog.all_monoids(4)) == 35

    def test_named_sizes(self):
        sizes = {k: m.size for k, m in catalog.named_corpus().items()}
        assert sizes["T3"] == 27 and sizes["S3"] == 6 and sizes["B2+"] == 6

    def test_transformation_monoid_acts_on_the_right(self):
        m, elems, gens = transformation_monoid([(1, 1), (0, 0)], 2)
        a, b = gens
        assert elems[m.mul(a, b)] == (0, 0)   # apply a, then b


class TestTextFormat:
    def test_roundtrip(self):
        for m in catalog.named_corpus().values():
            assert parse_monoid(format_monoid(m)) == m

    def test_comments_are_ignored(self):
        m = parse_monoid("# c\nmonoid 2\n# c\nidentity 1\ntable\n0 0\n0 1\n")
        assert m.identity == 1

    @pytest.mark.parametrize("text,line", [
        ("monoid x\n", 1),
        ("monoid 2\nidentity 0\ntable\n0 1\n1\n", 5),
        ("monoid 2\nidentity 5\ntable\n", 2),
        ("monoid 2\nident 0\n", 2),
        ("monoid 1\nidentity 0\ntable\nz\n", 4),
    ])
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ParseError) as exc:
            parse_monoid(text, "m.txt")
        assert exc.value.line == line and "m.txt" in str(exc.value)

    def test_missing_rows(self):
        with pytest.raises(ParseError):
            parse_monoid("monoid 2\nidentity 0\ntable\n0 1\n")

    def test_trailing_content(self):
        with pytest.raises(ParseError):
            parse_monoid("monoid 1\nidentity 0\ntable\n0\n0\n")

    def test_axioms_checked_after_parsing(self):
        with pytest.raises(IdentityViolation):
            parse_monoid("monoid 2\nidentity 0\ntable\n1 0\n0 1\n")

    def test_immutable(self):
        with pytest.raises(ValueError):
            Z2.table[0, 0] = 1

    def test_construction_from_numpy(self):
        assert FiniteMonoid(np.array([[0]]), 0) == catalog.trivial()
