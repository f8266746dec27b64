import numpy as np
import pytest
from hypothesis import given, settings

from monoidw import catalog, localdiv
from monoidw.monoid import check_morphism, idempotents, is_isomorphic, units
from monoidw.rewriting import SemiThueSystem, quotient_monoid
from strategies import transformation_monoids

U1 = catalog.u1()
NAMED = catalog.named_corpus()


def test_identity_gives_isomorphic_copy():
    for m in NAMED.values():
        ld = localdiv.local_divisor(m, m.identity)
        assert ld.carrier == tuple(m.elements())
        assert np.array_equal(ld.monoid.table, m.table)


def test_u1_zero():
    ld = localdiv.local_divisor(U1, 1)
    assert ld.carrier == (1,) and ld.size == 1


@pytest.mark.parametrize("name", sorted(NAMED))
def test_idempotent_gives_local_monoid(name):
    m = NAMED[name]
    for e in idempotents(m):
        ld = localdiv.local_divisor(m, e)
        eme = sorted({m.mul(m.mul(e, x), e) for x in m.elements()})
        assert list(ld.carrier) == eme
        for z1 in eme:
            for z2 in eme:
                assert ld.circ(z1, z2) == m.mul(z1, z2)


def test_circ_uses_any_witness():
    m = NAMED["T3"]
    for c in m.elements():
        ld = localdiv.local_divisor(m, c)
        for z1 in ld.carrier:
            for x in m.elements():
                if m.mul(x, c) == z1:
                    assert all(ld.circ(z1, z2) == m.mul(x, z2) for z2 in ld.carrier)


class TestLambda:
    def test_identity(self):
        m = NAMED["B2+"]
        lam = localdiv.lambda_c(m, m.identity)
        assert all(lam.mapping[x] == x for x in m.elements())

    def test_u1_zero_is_constant(self):
        lam = localdiv.lambda_c(U1, 1)
        assert lam.carrier == (0, 1) and set(lam.mapping.values()) == {0}

    def test_klein_bijective(self):
        k = catalog.klein()
        for c in k.elements():
            lam = localdiv.lambda_c(k, c)
            assert len(lam.carrier) == 4 and lam.is_injective()

    @settings(max_examples=60, deadline=None)
    @given(transformation_monoids())
    def test_random_surjective_morphism(self, m):
        for c in m.elements():
            lam = localdiv.lambda_c(m, c)
            assert check_morphism(lam) and lam.is_surjective()


class TestStrictness:
    def test_z2(self):
        report = localdiv.strictness_report(catalog.cyclic_group(2))
        assert [(e.size, e.unit) for e in report] == [(2, True), (2, True)]

    def test_u1(self):
        report = localdiv.strictness_report(U1)
        assert [(e.c, e.size, e.unit) for e in report] == [(0, 2, True), (1, 1, False)]

    def test_aaa(self):
        m = quotient_monoid(SemiThueSystem.of([("aaa", "a")], "a")).monoid
        report = {e.c: (e.size, e.unit) for e in localdiv.strictness_report(m)}
        assert report == {0: (3, True), 1: (2, False), 2: (2, False)}

    @settings(max_examples=60, deadline=None)
    @given(transformation_monoids())
    def test_random(self, m):
        unit_set = units(m)
        for entry in localdiv.strictness_report(m):
            if entry.unit:
                ld = localdiv.local_divisor(m, entry.c)
                assert is_isomorphic(ld.monoid, m)
                assert localdiv.unit_isomorphism(m, entry.c, ld).is_injective()
            else:
                assert entry.size < m.size and entry.c not in unit_set
