import itertools
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from monoidw import catalog, langs, rewriting
from monoidw.errors import InfiniteIndex, ParseError, PreconditionNotCertified
from monoidw.rewriting import SemiThueSystem

S = SemiThueSystem.of
ERASE = S([("a", ""), ("b", "")], "ab")
AAA = S([("aaa", "a")], "a")
# b is a zero, a generates a cyclic group part
ABSORB = S([("aaa", "a"), ("bb", "b"), ("ab", "b"), ("ba", "b")], "ab")

words_ab = st.text(alphabet="ab", max_size=10)


@st.composite
def length_reducing(draw):
    lhs = st.text(alphabet="ab", min_size=1, max_size=3)
    rules = []
    for l in draw(st.lists(lhs, min_size=1, max_size=3, unique=True)):
        rules.append((l, draw(st.text(alphabet="ab", max_size=len(l) - 1))))
    return S(rules, "ab")


class TestOrders:
    def test_subword(self):
        assert rewriting.check_reducing(ERASE, rewriting.SUBWORD)

    def test_equal_lengths(self):
        res = rewriting.check_reducing(S([("ab", "ba")]), rewriting.LENGTH)
        assert not res and res.rule == ("ab", "ba")

    def test_parikh(self):
        assert rewriting.check_reducing(S([("aab", "ab")]), rewriting.PARIKH)

    def test_parikh_image(self):
        assert rewriting.parikh_image("", "ab") == (0, 0)
        assert rewriting.parikh_image("abab", "ab") == (2, 2)

    def test_is_subword(self):
        assert all(rewriting.is_subword("", w) for w in ["", "a", "ba"])
        assert rewriting.is_subword("ab", "axbx")
        assert not rewriting.is_subword("ba", "aab")

    def test_weight_order_needs_gamma(self):
        with pytest.raises(ValueError):
            rewriting.ReductionOrder("weight")

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.tuples(st.text("ab", min_size=1, max_size=4), st.text("ab", max_size=4)),
                    min_size=1, max_size=3, unique=True),
           st.randoms(use_true_random=False))
    def test_implication_chain(self, rules, rnd):
        rules = [(l, r) for l, r in rules if l != r]
        assume(rules)
        s = S(rules, "ab")
        sub = bool(rewriting.check_reducing(s, rewriting.SUBWORD))
        par = bool(rewriting.check_reducing(s, rewriting.PARIKH))
        if sub:
            assert par
        if par:
            for _ in range(20):
                gamma = rewriting.WeightFunction({a: rnd.randint(1, 9) for a in "ab"})
                assert rewriting.check_reducing(s, rewriting.ReductionOrder("weight", gamma))
            unit = rewriting.WeightFunction.length("ab")
            assert rewriting.check_reducing(s, rewriting.ReductionOrder("weight", unit))
            assert rewriting.check_reducing(s, rewriting.LENGTH)


class TestWeights:
    def test_length_when_possible(self):
        assert rewriting.find_weight(AAA).weights == {"a": 1}

    def test_needs_heavier_letter(self):
        gamma = rewriting.find_weight(S([("ab", "bbb")]))
        assert gamma is not None and gamma("ab") > gamma("bbb")

    def test_impossible(self):
        assert rewriting.find_weight(S([("ab", "ba")])) is None
        assert rewriting.find_weight(S([("a", "bb"), ("b", "aa")])) is None

    def test_certify_rejects_bad_gamma(self):
        with pytest.raises(PreconditionNotCertified):
            rewriting.certify_termination(S([("ab", "bbb")]), rewriting.WeightFunction.length("ab"))

    def test_parse_weights(self):
        assert rewriting.parse_weights("a=2, b=3", "abc").weights == {"a": 2, "b": 3, "c": 1}
        with pytest.raises(ParseError):
            rewriting.parse_weights("z=1", "ab")
        with pytest.raises(ValueError):
            rewriting.parse_weights("a=0", "ab")


class TestNormalForm:
    def test_examples(self):
        assert rewriting.normal_form(ERASE, "abab") == ""
        assert rewriting.normal_form(AAA, "aaaa") == "aa"
        assert oracles.all_normal_forms(AAA.rules, "aaaa") == {"aa"}

    def test_irreducible_unchanged(self):
        s = S([("aa", ""), ("bb", "")], "ab")
        for w in ["", "ab", "abab", "babab"]:
            assert rewriting.normal_form(s, w) == w

    def test_unknown_symbol(self):
        with pytest.raises(Exception):
            rewriting.normal_form(AAA, "ab")

    def test_non_terminating_rejected(self):
        with pytest.raises(PreconditionNotCertified):
            rewriting.normal_form(S([("ab", "ba")]), "ab")

    def test_weight_reducing_system(self):
        s = S([("ab", "bbb")])
        assert rewriting.normal_form(s, "aab") == "bbbbb"

    @settings(max_examples=150, deadline=None)
    @given(length_reducing(), words_ab)
    def test_result_is_irreducible_descendant(self, s, w):
        nf = rewriting.normal_form(s, w)
        assert rewriting.is_irreducible(s, nf)
        assert nf in oracles.all_normal_forms(s.rules, w)

    @settings(max_examples=100, deadline=None)
    @given(length_reducing(), words_ab, words_ab)
    def test_congruence_for_confluent_systems(self, s, u, v):
        assume(rewriting.is_confluent(s))
        nf = lambda w: rewriting.normal_form(s, w)
        assert nf(u + v) == nf(nf(u) + nf(v))

    def test_one_step(self):
        assert rewriting.one_step_rewrites(AAA, "aaaa") == {"aa"}
        assert rewriting.one_step_rewrites(S([("ab", ""), ("ba", "")]), "aba") == {"a"}


class TestConfluence:
    def test_erase(self):
        assert rewriting.is_confluent(ERASE)

    def test_not_confluent(self):
        res = rewriting.is_confluent(S([("aa", ""), ("ab", "")], "ab"))
        assert not res
        assert res.witness.word == "aab"
        assert {res.witness.left, res.witness.right} == {"a", "b"}
        assert not oracles.confluent_up_to([("aa", ""), ("ab", "")], "ab", 8)

    def test_aaa(self):
        assert rewriting.is_confluent(AAA)
        assert oracles.confluent_up_to(AAA.rules, "a", 8)

    def test_critical_pairs_include_containment(self):
        cps = rewriting.critical_pairs(S([("aba", "b"), ("b", "")], "ab"))
        assert any(cp.word == "aba" and {cp.left, cp.right} == {"b", "aa"} for cp in cps)

    def test_self_overlap(self):
        cps = rewriting.critical_pairs(AAA)
        assert {cp.word for cp in cps} == {"aaaa", "aaaaa"}

    @settings(max_examples=300, deadline=None)
    @given(length_reducing())
    def test_agrees_with_oracle(self, s):
        assert bool(rewriting.is_confluent(s)) == oracles.confluent_up_to(s.rules, "ab", 8)


class TestQuotient:
    def test_erase(self):
        assert rewriting.finite_index(ERASE) == 1
        q = rewriting.quotient_monoid(ERASE)
        assert q.monoid.size == 1

    def test_aaa(self):
        assert rewriting.finite_index(AAA) == 3
        q = rewriting.quotient_monoid(AAA)
        assert q.words == ("", "a", "aa")
        assert q.monoid.mul(1, 2) == 1
        assert q.letter_images == {"a": 1}

    def test_infinite(self):
        s = S([("aa", "")], "ab")
        assert rewriting.finite_index(s) is None
        with pytest.raises(InfiniteIndex):
            rewriting.quotient_monoid(s)

    def test_requires_confluence(self):
        with pytest.raises(PreconditionNotCertified):
            rewriting.finite_index(S([("aa", ""), ("ab", "")], "ab"))

    def test_irreducible_dfa(self):
        irr = rewriting.irreducible_dfa(AAA)
        assert langs.is_finite(irr) and langs.finite_language(irr) == ["", "a", "aa"]

    def test_shortlex_order(self):
        q = rewriting.quotient_monoid(ABSORB)
        assert q.words == ("", "a", "b", "aa")

    def test_index_matches_distinct_normal_forms(self):
        rng = random.Random(3)
        lhs = [w for w in oracles.words("ab", 3) if w]
        checked = 0
        while checked < 40:
            rules = {}
            for l in rng.sample(lhs, rng.randint(2, 4)):
                rules[l] = "".join(rng.choice("ab") for _ in range(rng.randrange(len(l))))
            s = S(rules.items(), "ab")
            if not rewriting.is_confluent(s):
                continue
            index = rewriting.finite_index(s)
            if index is None:
                continue
            nfs = {rewriting.normal_form(s, w) for w in oracles.words("ab", 8)}
            assert len(nfs) == index
            checked += 1

    def test_quotient_is_a_morphism_image(self):
        s = ABSORB
        q = rewriting.quotient_monoid(s)
        for u, v in itertools.product(oracles.words("ab", 4), repeat=2):
            assert q.evaluate(u + v) == q.monoid.mul(q.evaluate(u), q.evaluate(v))
            assert q.evaluate(u) == q.element_of(rewriting.normal_form(s, u))


class TestFactorization:
    def test_trivial_target(self):
        assert rewriting.factorizes_through({"a": 0, "b": 0}, catalog.trivial(), ERASE)

    def test_z2(self):
        z2 = catalog.cyclic_group(2)
        assert rewriting.factorizes_through({"a": 1}, z2, AAA)
        assert not rewriting.factorizes_through({"a": 1}, z2, S([("aa", "a")]))


class TestRecognizes:
    def test_examples(self):
        assert rewriting.recognizes(AAA, langs.parse_regex("(aa)*", "a"))
        assert not rewriting.recognizes(S([("a", "")]), langs.parse_regex("(aa)*", "a"))
        assert rewriting.recognizes(ERASE, langs.universal("ab"))
        assert rewriting.recognizes(ERASE, langs.empty("ab"))

    def test_against_definition(self):
        """L is recognized iff membership is constant on each congruence class,
        checked over all words up to length 10."""
        s = ABSORB
        q = rewriting.quotient_monoid(s)
        rng = random.Random(5)
        for _ in range(30):
            d = langs.from_predicate("ab", 4, 0, lambda p, a, t=[rng.randrange(4) for _ in range(8)]: t[p * 2 + "ab".index(a)],
                                     lambda p, f=rng.getrandbits(4): bool(f >> p & 1))
            classes = {}
            for w in oracles.words("ab", 10):
                classes.setdefault(q.evaluate(w), set()).add(d.accepts(w))
            expected = all(len(v) == 1 for v in classes.values())
            assert rewriting.recognizes(s, d) == expected


class TestTextFormat:
    def test_parse(self):
        s = rewriting.parse_system("alphabet a b\n# comment\nab -> eps\nba -> eps  # trailing\n")
        assert s.alphabet == ("a", "b") and s.rules == (("ab", ""), ("ba", ""))

    def test_inferred_alphabet(self):
        assert rewriting.parse_system("ba -> a\n").alphabet == ("a", "b")

    def test_roundtrip(self):
        for s in (ERASE, AAA):
            assert rewriting.parse_system(rewriting.format_system(s)) == s

    @pytest.mark.parametrize("text,line", [
        ("ab => a\n", 1),
        ("a -> b\nalphabet a b\n", 2),
        ("eps -> a\n", 1),
        ("alphabet a\nab -> a\n", 2),
        ("a -> a\n", 1),
        ("a -> eps\na -> eps\n", 2),
        ("aepsb -> a\n", 1),
    ])
    def test_errors(self, text, line):
        with pytest.raises(ParseError) as exc:
            rewriting.parse_system(text, "s.sts")
        assert exc.value.line == line
