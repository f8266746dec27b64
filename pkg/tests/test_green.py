import pytest
from hypothesis import given, settings

import oracles
from monoidw import catalog, green
from monoidw.errors import NotREquivalent
from monoidw.monoid import VarietyPredicate, idempotents
from monoidw.rewriting import SemiThueSystem, quotient_monoid
from strategies import transformation_monoids

Z2 = catalog.cyclic_group(2)
U1 = catalog.u1()
T2, T2_NAMES = catalog.maps_on_two_points()


def partitions(m):
    g = green.green_classes(m)
    return {rel: set(g.classes(rel)) for rel in "LRJHD"}


class TestClasses:
    @pytest.mark.parametrize("m", [Z2, catalog.klein(), catalog.symmetric_group(3)])
    def test_group_has_one_class(self, m):
        for classes in partitions(m).values():
            assert classes == {frozenset(m.elements())}

    def test_u1(self):
        assert partitions(U1)["J"] == {frozenset({0}), frozenset({1})}

    def test_maps_on_two_points(self):
        p = partitions(T2)
        units = frozenset({T2_NAMES["id"], T2_NAMES["swap"]})
        consts = frozenset({T2_NAMES["const0"], T2_NAMES["const1"]})
        assert p["J"] == {units, consts}
        assert p == oracles.green_partitions(T2)

    @pytest.mark.parametrize("name", sorted(catalog.named_corpus()))
    def test_named_corpus_against_oracle(self, name):
        m = catalog.named_corpus()[name]
        assert partitions(m) == oracles.green_partitions(m)

    @settings(max_examples=60, deadline=None)
    @given(transformation_monoids())
    def test_random_against_oracle(self, m):
        g = green.green_classes(m)
        assert g.J == g.D == green.d_by_composition(m, g)
        assert partitions(m) == oracles.green_partitions(m)


@pytest.fixture(scope="module")
def aaa():
    return quotient_monoid(SemiThueSystem.of([("aaa", "a")], "a")).monoid


class TestSubgroups:
    def test_h_class(self, aaa):
        assert green.h_class(aaa, 2) == {1, 2}

    def test_maximal_subgroups(self, aaa):
        assert [(e, g.size) for e, g in green.maximal_subgroups(Z2)] == [(0, 2)]
        assert [(e, g.size) for e, g in green.maximal_subgroups(U1)] == [(0, 1), (1, 1)]
        assert [(e, g.size) for e, g in green.maximal_subgroups(aaa)] == [(0, 1), (2, 2)]

    def test_subgroups_satisfy(self):
        assert green.subgroups_satisfy(Z2, VarietyPredicate.ABELIAN)
        assert not green.subgroups_satisfy(Z2, VarietyPredicate.TRIVIAL)
        assert not green.subgroups_satisfy(catalog.full_transformation_monoid(3), VarietyPredicate.ABELIAN)
        for m in catalog.named_corpus().values():
            assert green.subgroups_satisfy(m, VarietyPredicate.ALL_GROUPS)


class TestGreensLemma:
    def test_group(self):
        m = catalog.symmetric_group(3)
        for s in m.elements():
            for t in m.elements():
                iso = green.greens_lemma_iso(m, s, t)
                assert iso.morphism.is_injective() and iso.morphism.is_surjective()

    def test_same_element_gives_identity(self):
        for m in catalog.named_corpus().values():
            for s in m.elements():
                iso = green.greens_lemma_iso(m, s, s)
                assert iso.parent_map() == {z: z for z in iso.source.carrier}

    def test_constants(self):
        c0, c1 = T2_NAMES["const0"], T2_NAMES["const1"]
        iso = green.greens_lemma_iso(T2, c0, c1)
        assert iso.source.size == iso.target.size == 1
        assert iso.parent_map() == {c0: c1}
        assert iso.multiplier == T2_NAMES["swap"]

    def test_lowest_multiplier(self):
        m = catalog.full_transformation_monoid(3)
        g = green.green_classes(m)
        for s in m.elements():
            for t in g.cls("R", s):
                iso = green.greens_lemma_iso(m, s, t, g)
                assert iso.multiplier == min(v for v in m.elements() if m.mul(s, v) == t)

    def test_unrelated(self):
        with pytest.raises(NotREquivalent):
            green.greens_lemma_iso(U1, 0, 1)

    @pytest.mark.parametrize("name", ["T3", "B2+", "chain3", "Z2xU1"])
    def test_idempotent_groups_isomorphic(self, name):
        m = catalog.named_corpus()[name]
        g = green.green_classes(m)
        idem = sorted(idempotents(m))
        for e in idem:
            for f in idem:
                if g.related("D", e, f):
                    iso = green.idempotent_group_isomorphism(m, e, f, g)
                    assert sorted(iso.values()) == sorted(g.cls("H", f))


class TestUnitsOfLocalDivisor:
    def test_examples(self):
        assert all(green.units_of_local_divisor_equal_h_class(Z2, s) for s in Z2.elements())
        assert green.units_of_local_divisor_equal_h_class(U1, 1)

    @settings(max_examples=60, deadline=None)
    @given(transformation_monoids())
    def test_random(self, m):
        g = green.green_classes(m)
        assert all(green.units_of_local_divisor_equal_h_class(m, s, g) for s in m.elements())


def test_eggbox():
    text = green.render_eggbox(T2)
    assert text.count("D-class") == 2
    assert "*" in text
    lines = [line for line in text.splitlines() if line.startswith("|")]
    # the constants form one R-class split across two L-classes
    assert any(line.count("|") == 3 for line in lines)
