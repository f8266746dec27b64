"""Finite semi-Thue systems: reduction orders, normal forms, confluence,
finite index and quotient monoids."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import langs
from .errors import (
    InfiniteIndex,
    MonoidwError,
    NonTerminatingSuspected,
    ParseError,
    PreconditionNotCertified,
)
from .langs import Dfa
from .monoid import FiniteMonoid

EPS = "eps"


def show(word: str) -> str:
    return word if word else EPS


@dataclass(frozen=True)
class SemiThueSystem:
    alphabet: tuple[str, ...]
    rules: tuple[tuple[str, str], ...]

    def __post_init__(self):
        letters = set(self.alphabet)
        if len(letters) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        seen = set()
        for lhs, rhs in self.rules:
            if not lhs:
                raise ValueError("left-hand sides must be non-empty")
            if lhs == rhs:
                raise ValueError(f"rule {lhs} -> {show(rhs)} does not change anything")
            bad = set(lhs + rhs) - letters
            if bad:
                raise ValueError(f"rule {lhs} -> {show(rhs)} uses symbols {sorted(bad)} outside the alphabet")
            if (lhs, rhs) in seen:
                raise ValueError(f"duplicate rule {lhs} -> {show(rhs)}")
            seen.add((lhs, rhs))

    @classmethod
    def of(cls, rules: Iterable[tuple[str, str]], alphabet: Iterable[str] | None = None) -> SemiThueSystem:
        rules = tuple((l, r) for l, r in rules)
        if alphabet is None:
            alphabet = sorted({a for l, r in rules for a in l + r})
        return cls(tuple(alphabet), rules)

    def __str__(self) -> str:
        return ", ".join(f"{l} -> {show(r)}" for l, r in self.rules)


@dataclass(frozen=True)
class WeightFunction:
    weights: Mapping[str, int] = field(hash=False)

    def __post_init__(self):
        for a, g in self.weights.items():
            if int(g) != g or g < 1:
                raise ValueError(f"weight of {a!r} must be a positive integer, got {g}")

    def __call__(self, word: str) -> int:
        return sum(self.weights[a] for a in word)

    @classmethod
    def length(cls, alphabet: Iterable[str]) -> WeightFunction:
        return cls({a: 1 for a in alphabet})


@dataclass(frozen=True)
class ReductionOrder:
    kind: str                       # length | weight | parikh | subword
    gamma: WeightFunction | None = None

    KINDS = ("length", "weight", "parikh", "subword")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown order {self.kind!r}")
        if self.kind == "weight" and self.gamma is None:
            raise ValueError("weight order needs a weight function")


LENGTH = ReductionOrder("length")
PARIKH = ReductionOrder("parikh")
SUBWORD = ReductionOrder("subword")


def parikh_image(word: str, alphabet: Sequence[str]) -> tuple[int, ...]:
    bad = set(word) - set(alphabet)
    if bad:
        raise MonoidwError(f"symbols {sorted(bad)} not in alphabet")
    return tuple(word.count(a) for a in alphabet)


def is_subword(u: str, w: str) -> bool:
    """Scattered subword: u is obtained from w by deleting letters."""
    it = iter(w)
    return all(a in it for a in u)


def rule_reduces(lhs: str, rhs: str, order: ReductionOrder, alphabet: Sequence[str]) -> bool:
    if order.kind == "length":
        return len(lhs) > len(rhs)
    if order.kind == "weight":
        return order.gamma(lhs) > order.gamma(rhs)
    if order.kind == "parikh":
        pl, pr = parikh_image(lhs, alphabet), parikh_image(rhs, alphabet)
        return all(x >= y for x, y in zip(pl, pr)) and pl != pr
    return lhs != rhs and is_subword(rhs, lhs)


@dataclass(frozen=True)
class ReducingCheck:
    ok: bool
    rule: tuple[str, str] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_reducing(s: SemiThueSystem, order: ReductionOrder) -> ReducingCheck:
    for lhs, rhs in s.rules:
        if not rule_reduces(lhs, rhs, order, s.alphabet):
            return ReducingCheck(False, (lhs, rhs))
    return ReducingCheck(True)


def find_weight(s: SemiThueSystem) -> WeightFunction | None:
    """A weight function making every rule strictly decreasing, if one exists.

    Solves ``γ·(π(ℓ) - π(r)) >= 1, γ >= 1`` as a linear program, then
    rationalizes and scales the solution to integers and re-checks it exactly.
    """
    if not s.rules:
        return WeightFunction.length(s.alphabet)
    length = WeightFunction.length(s.alphabet)
    if check_reducing(s, ReductionOrder("weight", length)):
        return length
    from scipy.optimize import linprog

    k = len(s.alphabet)
    diff = np.array([np.subtract(parikh_image(l, s.alphabet), parikh_image(r, s.alphabet))
                     for l, r in s.rules], dtype=float)
    res = linprog(c=np.ones(k), A_ub=-diff, b_ub=-np.ones(len(s.rules)),
                  bounds=[(1, None)] * k, method="highs")
    if res.status != 0:
        return None
    fracs = [Fraction(float(x)).limit_denominator(10**6) for x in res.x]
    scale = 1
    for f in fracs:
        scale = scale * f.denominator // np.gcd(scale, f.denominator)
    ints = [max(1, int(f * scale)) for f in fracs]
    gamma = WeightFunction(dict(zip(s.alphabet, ints)))
    if check_reducing(s, ReductionOrder("weight", gamma)):
        return gamma
    return None


def certify_termination(s: SemiThueSystem, gamma: WeightFunction | None = None) -> WeightFunction:
    if gamma is not None:
        bad = check_reducing(s, ReductionOrder("weight", gamma))
        if not bad:
            raise PreconditionNotCertified(f"rule {bad.rule[0]} -> {show(bad.rule[1])} is not weight-reducing")
        return gamma
    found = find_weight(s)
    if found is None:
        raise PreconditionNotCertified("no weight function makes the system reducing")
    return found


class Rewriter:
    """Left-to-right stack reduction.

    The stack holds an irreducible prefix; after each pushed letter every
    left side is tested against the stack suffix, and a match is replaced
    by pushing the right side back onto the unread input. Rules are tried
    in the order given, so for non-confluent systems the result depends on
    that order.
    """

    def __init__(self, s: SemiThueSystem, gamma: WeightFunction | None = None):
        self.system = s
        self.gamma = certify_termination(s, gamma)
        by_len: dict[int, dict[str, str]] = {}
        for lhs, rhs in s.rules:
            by_len.setdefault(len(lhs), {}).setdefault(lhs, rhs)
        self.by_len = sorted(by_len.items())

    def normal_form(self, word: str) -> str:
        budget = self.gamma(word)
        pending = list(reversed(word))
        stack: list[str] = []
        steps = 0
        by_len = self.by_len
        while pending:
            stack.append(pending.pop())
            for k, table in by_len:
                if k > len(stack):
                    break
                rhs = table.get("".join(stack[-k:]))
                if rhs is not None:
                    steps += 1
                    if steps > budget:
                        raise NonTerminatingSuspected(f"more than {budget} steps on {word[:40]!r}")
                    del stack[-k:]
                    pending.extend(reversed(rhs))
                    break
        return "".join(stack)

    def is_irreducible(self, word: str) -> bool:
        return not any(lhs in word for _, t in self.by_len for lhs in t)


@functools.lru_cache(maxsize=256)
def _rewriter(s: SemiThueSystem, gamma_items: tuple | None) -> Rewriter:
    gamma = WeightFunction(dict(gamma_items)) if gamma_items is not None else None
    return Rewriter(s, gamma)


def rewriter(s: SemiThueSystem, gamma: WeightFunction | None = None) -> Rewriter:
    key = tuple(sorted(gamma.weights.items())) if gamma is not None else None
    return _rewriter(s, key)


def normal_form(s: SemiThueSystem, word: str, gamma: WeightFunction | None = None) -> str:
    bad = set(word) - set(s.alphabet)
    if bad:
        raise MonoidwError(f"symbols {sorted(bad)} not in alphabet")
    return rewriter(s, gamma).normal_form(word)


def is_irreducible(s: SemiThueSystem, word: str) -> bool:
    return not any(lhs in word for lhs, _ in s.rules)


def one_step_rewrites(s: SemiThueSystem, word: str) -> set[str]:
    out = set()
    for lhs, rhs in s.rules:
        start = word.find(lhs)
        while start >= 0:
            out.add(word[:start] + rhs + word[start + len(lhs):])
            start = word.find(lhs, start + 1)
    return out


@dataclass(frozen=True)
class CriticalPair:
    word: str
    left: str
    right: str


def critical_pairs(s: SemiThueSystem) -> list[CriticalPair]:
    """Suffix-prefix overlaps of every ordered pair of rules (including a
    rule with itself) and containments of one left side inside another."""
    out = []
    rules = s.rules
    for i, (l1, r1) in enumerate(rules):
        for j, (l2, r2) in enumerate(rules):
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    word = l1 + l2[k:]
                    out.append(CriticalPair(word, r1 + l2[k:], l1[:-k] + r2))
            if i != j and len(l2) <= len(l1):
                pos = l1.find(l2)
                while pos >= 0:
                    out.append(CriticalPair(l1, r1, l1[:pos] + r2 + l1[pos + len(l2):]))
                    pos = l1.find(l2, pos + 1)
    return out


@dataclass(frozen=True)
class ConfluenceResult:
    confluent: bool
    witness: CriticalPair | None = None
    normal_forms: tuple[str, str] | None = None

    def __bool__(self) -> bool:
        return self.confluent


def is_confluent(s: SemiThueSystem, gamma: WeightFunction | None = None) -> ConfluenceResult:
    """Critical-pair test; exact for terminating systems."""
    rw = rewriter(s, gamma)
    for cp in critical_pairs(s):
        a, b = rw.normal_form(cp.left), rw.normal_form(cp.right)
        if a != b:
            return ConfluenceResult(False, cp, (a, b))
    return ConfluenceResult(True)


def irreducible_dfa(s: SemiThueSystem) -> Dfa:
    """DFA for words containing no left side as a factor.

    States are the prefixes of left sides (the longest one that is a suffix
    of the input read so far) plus a sink entered once a left side has
    occurred.
    """
    prefixes = {""}
    for lhs, _ in s.rules:
        prefixes.update(lhs[:k] for k in range(len(lhs)))
    lhss = {lhs for lhs, _ in s.rules}
    index = {"": 0}
    order = [""]
    delta: list[list[int]] = []
    i = 0
    while i < len(order):
        cur = order[i]
        row = []
        for a in s.alphabet:
            text = cur + a
            if any(text.endswith(l) for l in lhss):
                row.append(-1)
                continue
            nxt = next(text[k:] for k in range(len(text) + 1) if text[k:] in prefixes)
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            row.append(index[nxt])
        delta.append(row)
        i += 1
    n = len(order)
    sink = n
    table = tuple(tuple(sink if r < 0 else r for r in row) for row in delta)
    table += ((sink,) * len(s.alphabet),)
    return Dfa(tuple(s.alphabet), 0, frozenset(range(n)), table)


def _certify(s: SemiThueSystem, gamma: WeightFunction | None) -> Rewriter:
    rw = rewriter(s, gamma)  # raises if no termination certificate
    conf = is_confluent(s, gamma)
    if not conf:
        cp = conf.witness
        raise PreconditionNotCertified(
            f"not confluent: {show(cp.word)} rewrites to {show(cp.left)} and {show(cp.right)} "
            f"with distinct normal forms {show(conf.normal_forms[0])}, {show(conf.normal_forms[1])}"
        )
    return rw


def finite_index(s: SemiThueSystem, gamma: WeightFunction | None = None) -> int | None:
    """Number of congruence classes, or None when there are infinitely many."""
    _certify(s, gamma)
    irr = irreducible_dfa(s)
    if not langs.is_finite(irr):
        return None
    return langs.count_words(irr)


@dataclass(frozen=True)
class Quotient:
    system: SemiThueSystem
    monoid: FiniteMonoid
    words: tuple[str, ...]          # irreducible representative of each element, shortlex
    letter_images: dict[str, int] = field(hash=False)

    def evaluate(self, word: str) -> int:
        return self.monoid.product(self.letter_images[a] for a in word)

    def element_of(self, word: str) -> int:
        return self.words.index(normal_form(self.system, word))

    def recognition(self, accepting: Iterable[int]) -> langs.RecognitionData:
        return langs.RecognitionData(self.monoid, self.system.alphabet, dict(self.letter_images),
                                     frozenset(accepting))


def quotient_monoid(s: SemiThueSystem, gamma: WeightFunction | None = None) -> Quotient:
    rw = _certify(s, gamma)
    irr = irreducible_dfa(s)
    if not langs.is_finite(irr):
        raise InfiniteIndex("infinitely many irreducible words")
    words = tuple(langs.finite_language(irr))
    pos = {w: i for i, w in enumerate(words)}
    table = [[pos[rw.normal_form(u + v)] for v in words] for u in words]
    monoid = FiniteMonoid(table, pos[""])
    images = {a: pos[rw.normal_form(a)] for a in s.alphabet}
    return Quotient(s, monoid, words, images)


def factorizes_through(letter_images: Mapping[str, int], target: FiniteMonoid, s: SemiThueSystem) -> bool:
    """Whether both sides of every rule evaluate to the same element."""
    def ev(w):
        return target.product(letter_images[a] for a in w)
    return all(ev(l) == ev(r) for l, r in s.rules)


def quotient_automaton(q: Quotient, language: Dfa) -> Dfa:
    """States are quotient elements; accepting are those whose representative
    lies in ``language``."""
    accepting = [i for i, w in enumerate(q.words) if language.accepts(w)]
    return q.recognition(accepting).to_dfa()


def recognizes(s: SemiThueSystem, language: Dfa, gamma: WeightFunction | None = None) -> bool:
    """Whether ``language`` is a union of congruence classes of ``s``."""
    q = quotient_monoid(s, gamma)
    if set(language.alphabet) - set(s.alphabet):
        raise MonoidwError("language uses symbols outside the system's alphabet")
    language = langs.extend_alphabet(language, s.alphabet) if language.alphabet != s.alphabet else language
    return langs.equivalent(language, quotient_automaton(q, language))


# -- text format ---------------------------------------------------------------------

def _word(tok: str, no: int, source) -> str:
    if tok == EPS:
        return ""
    if EPS in tok:
        raise ParseError(f"'{EPS}' must stand alone, got {tok!r}", no, source)
    return tok


def parse_system(text: str, source: str | None = None) -> SemiThueSystem:
    alphabet = None
    rules = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        if s.startswith("alphabet"):
            if alphabet is not None or rules:
                raise ParseError("'alphabet' must be the first line", no, source)
            syms = s.split()[1:]
            if not syms or any(len(a) != 1 for a in syms) or len(set(syms)) != len(syms):
                raise ParseError("alphabet must list distinct single characters", no, source)
            alphabet = tuple(syms)
            continue
        parts = s.split()
        if len(parts) != 3 or parts[1] != "->":
            raise ParseError("expected '<lhs> -> <rhs>'", no, source)
        lhs, rhs = _word(parts[0], no, source), _word(parts[2], no, source)
        if not lhs:
            raise ParseError("empty left-hand side", no, source)
        if alphabet is not None:
            bad = set(lhs + rhs) - set(alphabet)
            if bad:
                raise ParseError(f"symbols {sorted(bad)} not in declared alphabet", no, source)
        if (lhs, rhs) in rules:
            raise ParseError(f"duplicate rule {parts[0]} -> {parts[2]}", no, source)
        if lhs == rhs:
            raise ParseError("rule does not change the word", no, source)
        rules.append((lhs, rhs))
    try:
        return SemiThueSystem.of(rules, alphabet)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def format_system(s: SemiThueSystem) -> str:
    lines = ["alphabet " + " ".join(s.alphabet)]
    lines += [f"{l} -> {show(r)}" for l, r in s.rules]
    return "\n".join(lines) + "\n"


def parse_weights(spec: str, alphabet: Sequence[str]) -> WeightFunction:
    """``a=2,b=1`` style weights; unspecified letters default to 1."""
    weights = {a: 1 for a in alphabet}
    for item in filter(None, (p.strip() for p in spec.split(","))):
        if "=" not in item:
            raise ParseError(f"bad weight {item!r}, expected letter=value")
        a, v = item.split("=", 1)
        if a not in weights:
            raise ParseError(f"weight for unknown letter {a!r}")
        try:
            weights[a] = int(v)
        except ValueError:
            raise ParseError(f"weight {v!r} is not an integer") from None
    return WeightFunction(weights)
