"""Total DFAs over single-character alphabets and the monoids they define."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from . import config
from .errors import MonoidwError, ParseError, SizeGuardExceeded
from .monoid import FiniteMonoid, transformation_monoid


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple[str, ...]
    initial: int
    finals: frozenset[int]
    delta: tuple[tuple[int, ...], ...]   # delta[state][symbol index]

    def __post_init__(self):
        n = len(self.delta)
        if n == 0:
            raise ValueError("a DFA needs at least one state")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        for q in self.finals:
            if not 0 <= q < n:
                raise ValueError(f"final state {q} out of range")
        k = len(self.alphabet)
        for q, row in enumerate(self.delta):
            if len(row) != k:
                raise ValueError(f"state {q} has {len(row)} transitions, expected {k}")
            for r in row:
                if not 0 <= r < n:
                    raise ValueError(f"transition from {q} to {r} out of range")

    @property
    def states(self) -> int:
        return len(self.delta)

    def symbol_index(self, a: str) -> int:
        try:
            return self.alphabet.index(a)
        except ValueError:
            raise MonoidwError(f"symbol {a!r} not in alphabet {''.join(self.alphabet)!r}") from None

    def run(self, word: str, state: int | None = None) -> int:
        q = self.initial if state is None else state
        idx = {a: i for i, a in enumerate(self.alphabet)}
        for a in word:
            if a not in idx:
                raise MonoidwError(f"symbol {a!r} not in alphabet")
            q = self.delta[q][idx[a]]
        return q

    def accepts(self, word: str) -> bool:
        return self.run(word) in self.finals


def words_up_to(alphabet: Sequence[str], n: int) -> Iterator[str]:
    """All words of length <= n in shortlex order."""
    for k in range(n + 1):
        for t in itertools.product(alphabet, repeat=k):
            yield "".join(t)


def _alphabet_of(words: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted({a for w in words for a in w}))


# -- basic constructions -------------------------------------------------------

def empty(alphabet: Sequence[str]) -> Dfa:
    return Dfa(tuple(alphabet), 0, frozenset(), ((0,) * len(alphabet),))


def universal(alphabet: Sequence[str]) -> Dfa:
    return Dfa(tuple(alphabet), 0, frozenset({0}), ((0,) * len(alphabet),))


def from_finite_set(words: Iterable[str], alphabet: Sequence[str] | None = None) -> Dfa:
    words = list(words)
    alphabet = _alphabet_of(words) if alphabet is None else tuple(alphabet)
    idx = {a: i for i, a in enumerate(alphabet)}
    trie: list[list[int]] = [[-1] * len(alphabet)]
    finals = set()
    for w in words:
        q = 0
        for a in w:
            if a not in idx:
                raise MonoidwError(f"symbol {a!r} not in alphabet")
            nxt = trie[q][idx[a]]
            if nxt < 0:
                nxt = len(trie)
                trie.append([-1] * len(alphabet))
                trie[q][idx[a]] = nxt
            q = nxt
        finals.add(q)
    sink = len(trie)
    delta = tuple(tuple(sink if r < 0 else r for r in row) for row in trie)
    delta += ((sink,) * len(alphabet),)
    return Dfa(tuple(alphabet), 0, frozenset(finals), delta)


def from_predicate(alphabet: Sequence[str], states: int, initial: int,
                   step: Callable[[int, str], int], accept: Callable[[int], bool]) -> Dfa:
    delta = tuple(tuple(step(q, a) for a in alphabet) for q in range(states))
    return Dfa(tuple(alphabet), initial, frozenset(q for q in range(states) if accept(q)), delta)


def extend_alphabet(d: Dfa, alphabet: Sequence[str]) -> Dfa:
    """Same language over a larger alphabet (new symbols go to a sink)."""
    alphabet = tuple(alphabet)
    if alphabet == d.alphabet:
        return d
    missing = set(d.alphabet) - set(alphabet)
    if missing:
        raise MonoidwError(f"alphabet lacks symbols {sorted(missing)}")
    sink = d.states
    old = {a: i for i, a in enumerate(d.alphabet)}
    delta = [tuple(row[old[a]] if a in old else sink for a in alphabet) for row in d.delta]
    delta.append((sink,) * len(alphabet))
    return Dfa(alphabet, d.initial, d.finals, tuple(delta))


def _common(a: Dfa, b: Dfa) -> tuple[Dfa, Dfa]:
    if a.alphabet == b.alphabet:
        return a, b
    alphabet = tuple(sorted(set(a.alphabet) | set(b.alphabet)))
    return extend_alphabet(a, alphabet), extend_alphabet(b, alphabet)


def complement(d: Dfa) -> Dfa:
    return Dfa(d.alphabet, d.initial, frozenset(range(d.states)) - d.finals, d.delta)


def product(a: Dfa, b: Dfa, accept: Callable[[bool, bool], bool]) -> Dfa:
    a, b = _common(a, b)
    start = (a.initial, b.initial)
    index = {start: 0}
    pairs = [start]
    delta = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        row = []
        for s in range(len(a.alphabet)):
            nxt = (a.delta[p][s], b.delta[q][s])
            k = index.get(nxt)
            if k is None:
                k = len(pairs)
                if k >= config.STATE_GUARD:
                    raise SizeGuardExceeded("product automaton", k + 1, config.STATE_GUARD)
                index[nxt] = k
                pairs.append(nxt)
            row.append(k)
        delta.append(tuple(row))
        i += 1
    finals = frozenset(k for k, (p, q) in enumerate(pairs) if accept(p in a.finals, q in b.finals))
    return Dfa(a.alphabet, 0, finals, tuple(delta))


def union(a: Dfa, b: Dfa) -> Dfa:
    return product(a, b, lambda x, y: x or y)


def intersection(a: Dfa, b: Dfa) -> Dfa:
    return product(a, b, lambda x, y: x and y)


def difference(a: Dfa, b: Dfa) -> Dfa:
    return product(a, b, lambda x, y: x and not y)


# -- NFAs for concatenation and star ---------------------------------------------

@dataclass
class Nfa:
    alphabet: tuple[str, ...]
    states: int
    initial: set[int]
    finals: set[int]
    trans: dict[tuple[int, int], set[int]]
    eps: dict[int, set[int]]

    def closure(self, states: Iterable[int]) -> frozenset[int]:
        seen = set(states)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for r in self.eps.get(q, ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)


def to_nfa(d: Dfa, offset: int = 0) -> Nfa:
    trans = {(q + offset, s): {r + offset} for q, row in enumerate(d.delta) for s, r in enumerate(row)}
    return Nfa(d.alphabet, d.states, {d.initial + offset}, {q + offset for q in d.finals}, trans, {})


def determinize(nfa: Nfa) -> Dfa:
    start = nfa.closure(nfa.initial)
    index = {start: 0}
    subsets = [start]
    delta = []
    i = 0
    while i < len(subsets):
        cur = subsets[i]
        row = []
        for s in range(len(nfa.alphabet)):
            step = set()
            for q in cur:
                step |= nfa.trans.get((q, s), set())
            nxt = nfa.closure(step)
            k = index.get(nxt)
            if k is None:
                k = len(subsets)
                if k >= config.STATE_GUARD:
                    raise SizeGuardExceeded("subset construction", k + 1, config.STATE_GUARD)
                index[nxt] = k
                subsets.append(nxt)
            row.append(k)
        delta.append(tuple(row))
        i += 1
    finals = frozenset(k for k, sub in enumerate(subsets) if sub & nfa.finals)
    return Dfa(nfa.alphabet, 0, finals, tuple(delta))


def concat(a: Dfa, b: Dfa) -> Dfa:
    a, b = _common(a, b)
    na = to_nfa(a)
    nb = to_nfa(b, offset=a.states)
    trans = {**na.trans, **nb.trans}
    eps = {q: set(nb.initial) for q in na.finals}
    nfa = Nfa(a.alphabet, a.states + b.states, set(na.initial), set(nb.finals), trans, eps)
    return minimize(determinize(nfa))


def star(a: Dfa) -> Dfa:
    n = to_nfa(a, offset=1)
    # fresh state 0 is initial and final; finals loop back to it
    eps = {0: set(n.initial)}
    for q in n.finals:
        eps.setdefault(q, set()).add(0)
    nfa = Nfa(a.alphabet, a.states + 1, {0}, {0} | n.finals, n.trans, eps)
    return minimize(determinize(nfa))


def plus(a: Dfa) -> Dfa:
    return concat(a, star(a))


def power(a: Dfa, d: int) -> Dfa:
    out = from_finite_set([""], a.alphabet)
    for _ in range(d):
        out = concat(out, a)
    return out


# -- analysis ------------------------------------------------------------------------

def reachable(d: Dfa) -> list[int]:
    """Reachable states in BFS order from the initial state."""
    order = [d.initial]
    seen = {d.initial}
    i = 0
    while i < len(order):
        for r in d.delta[order[i]]:
            if r not in seen:
                seen.add(r)
                order.append(r)
        i += 1
    return order


def canonical(d: Dfa) -> Dfa:
    """Drop unreachable states and renumber in BFS order."""
    order = reachable(d)
    pos = {q: i for i, q in enumerate(order)}
    delta = tuple(tuple(pos[r] for r in d.delta[q]) for q in order)
    return Dfa(d.alphabet, 0, frozenset(pos[q] for q in order if q in d.finals), delta)


def minimize(d: Dfa) -> Dfa:
    """Moore partition refinement on the reachable part, BFS numbered."""
    d = canonical(d)
    first = d.initial in d.finals
    block = [0 if (q in d.finals) == first else 1 for q in range(d.states)]
    while True:
        sig = {}
        new = []
        for q in range(d.states):
            key = (block[q],) + tuple(block[r] for r in d.delta[q])
            new.append(sig.setdefault(key, len(sig)))
        if len(sig) == len(set(block)):
            break
        block = new
    reps: dict[int, int] = {}
    for q in range(d.states):
        reps.setdefault(block[q], q)
    delta = tuple(tuple(block[r] for r in d.delta[reps[b]]) for b in range(len(reps)))
    finals = frozenset(block[q] for q in d.finals)
    return canonical(Dfa(d.alphabet, block[d.initial], finals, delta))


def shortest_word(d: Dfa) -> str | None:
    prev: dict[int, tuple[int, str] | None] = {d.initial: None}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        if q in d.finals:
            out = []
            while prev[q] is not None:
                q, a = prev[q]
                out.append(a)
            return "".join(reversed(out))
        for s, r in enumerate(d.delta[q]):
            if r not in prev:
                prev[r] = (q, d.alphabet[s])
                queue.append(r)
    return None


def is_empty(d: Dfa) -> bool:
    return not (set(reachable(d)) & d.finals)


def distinguishing_word(a: Dfa, b: Dfa) -> str | None:
    """A shortest word in exactly one of the two languages, or None."""
    return shortest_word(product(a, b, lambda x, y: x != y))


def equivalent(a: Dfa, b: Dfa) -> bool:
    return distinguishing_word(a, b) is None


def _useful(d: Dfa) -> set[int]:
    reach = set(reachable(d))
    back: dict[int, set[int]] = {}
    for q in range(d.states):
        for r in d.delta[q]:
            back.setdefault(r, set()).add(q)
    co = set(q for q in d.finals)
    stack = list(co)
    while stack:
        q = stack.pop()
        for p in back.get(q, ()):
            if p not in co:
                co.add(p)
                stack.append(p)
    return reach & co


def is_finite(d: Dfa) -> bool:
    useful = _useful(d)
    color = {}
    for root in useful:
        if root in color:
            continue
        color[root] = 1
        stack = [(root, iter(d.delta[root]))]
        while stack:
            q, it = stack[-1]
            for r in it:
                if r not in useful:
                    continue
                c = color.get(r)
                if c == 1:
                    return False
                if c is None:
                    color[r] = 1
                    stack.append((r, iter(d.delta[r])))
                    break
            else:
                color[q] = 2
                stack.pop()
    return True


def count_words(d: Dfa) -> int:
    """Number of accepted words; the language must be finite."""
    if not is_finite(d):
        raise MonoidwError("language is infinite")
    useful = _useful(d)
    memo: dict[int, int] = {}

    def paths(q: int) -> int:
        if q in memo:
            return memo[q]
        total = 1 if q in d.finals else 0
        for r in d.delta[q]:
            if r in useful:
                total += paths(r)
        memo[q] = total
        return total

    return paths(d.initial) if d.initial in useful else 0


def accepted_words(d: Dfa, max_len: int) -> list[str]:
    return [w for w in words_up_to(d.alphabet, max_len) if d.accepts(w)]


def finite_language(d: Dfa) -> list[str]:
    """All accepted words in shortlex order; the language must be finite."""
    if not is_finite(d):
        raise MonoidwError("language is infinite")
    useful = _useful(d)
    out = []

    def walk(q, prefix):
        if q in d.finals:
            out.append(prefix)
        for s, r in enumerate(d.delta[q]):
            if r in useful:
                walk(r, prefix + d.alphabet[s])

    if d.initial in useful:
        walk(d.initial, "")
    return sorted(out, key=lambda w: (len(w), w))


# -- recognition by monoids -----------------------------------------------------------

@dataclass(frozen=True)
class RecognitionData:
    """A morphism from words onto ``monoid`` given by letter images, plus the
    accepting subset; the recognised language is ``φ⁻¹(accepting)``."""

    monoid: FiniteMonoid
    alphabet: tuple[str, ...]
    letter_images: dict[str, int]
    accepting: frozenset[int]

    def evaluate(self, word: str) -> int:
        return self.monoid.product(self.letter_images[a] for a in word)

    def accepts(self, word: str) -> bool:
        return self.evaluate(word) in self.accepting

    def to_dfa(self) -> Dfa:
        m = self.monoid
        return from_predicate(self.alphabet, m.size, m.identity,
                              lambda q, a: m.mul(q, self.letter_images[a]),
                              lambda q: q in self.accepting)


def _verification_length(alphabet_size: int, budget: int = 4096, cap: int = 8) -> int:
    if alphabet_size <= 1:
        return cap
    n = 0
    while n < cap and alphabet_size ** (n + 1) <= budget:
        n += 1
    return n


def transition_monoid(d: Dfa, guard: int | None = None) -> RecognitionData:
    gens = [tuple(d.delta[q][s] for q in range(d.states)) for s in range(len(d.alphabet))]
    m, elems, gen_idx = transformation_monoid(gens, d.states, guard)
    accepting = frozenset(i for i, f in enumerate(elems) if f[d.initial] in d.finals)
    data = RecognitionData(m, d.alphabet, dict(zip(d.alphabet, gen_idx)), accepting)
    for w in words_up_to(d.alphabet, _verification_length(len(d.alphabet))):
        if data.accepts(w) != d.accepts(w):
            raise MonoidwError(f"transition monoid disagrees with the automaton on {w!r}")
    return data


def syntactic_monoid(d: Dfa, guard: int | None = None) -> RecognitionData:
    return transition_monoid(minimize(d), guard)


# -- text formats ---------------------------------------------------------------------

def parse_dfa(text: str, source: str | None = None) -> Dfa:
    alphabet = None
    states = initial = None
    finals: set[int] | None = None
    trans: dict[tuple[int, str], int] = {}
    header = False
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        key, rest = parts[0], parts[1:]
        if not header:
            if key != "dfa" or rest:
                raise ParseError("expected 'dfa' header", no, source)
            header = True
            continue
        try:
            if key == "alphabet":
                if not rest or any(len(a) != 1 for a in rest) or len(set(rest)) != len(rest):
                    raise ParseError("alphabet must list distinct single characters", no, source)
                alphabet = tuple(rest)
            elif key == "states":
                (states,) = map(int, rest)
                if states < 1:
                    raise ParseError("need at least one state", no, source)
            elif key == "initial":
                (initial,) = map(int, rest)
            elif key == "final":
                finals = set(map(int, rest))
            elif key == "trans":
                if len(rest) != 3:
                    raise ParseError("expected 'trans <q> <symbol> <q2>'", no, source)
                q, a, r = int(rest[0]), rest[1], int(rest[2])
                if (q, a) in trans:
                    raise ParseError(f"duplicate transition ({q}, {a})", no, source)
                trans[(q, a)] = r
            else:
                raise ParseError(f"unknown keyword {key!r}", no, source)
        except ValueError:
            raise ParseError(f"malformed '{key}' line", no, source) from None
    if not header:
        raise ParseError("empty input, expected 'dfa'", None, source)
    for name, val in (("alphabet", alphabet), ("states", states), ("initial", initial)):
        if val is None:
            raise ParseError(f"missing '{name}' line", None, source)
    finals = finals or set()
    for q in list(finals) + [initial]:
        if not 0 <= q < states:
            raise ParseError(f"state {q} out of range", None, source)
    delta = []
    for q in range(states):
        row = []
        for a in alphabet:
            if (q, a) not in trans:
                raise ParseError(f"automaton not total: no transition for ({q}, {a})", None, source)
            r = trans[(q, a)]
            if not 0 <= r < states:
                raise ParseError(f"transition target {r} out of range", None, source)
            row.append(r)
        delta.append(tuple(row))
    extra = [k for k in trans if k[0] >= states or k[1] not in alphabet]
    if extra:
        raise ParseError(f"transition {extra[0]} uses an unknown state or symbol", None, source)
    return Dfa(alphabet, initial, frozenset(finals), tuple(delta))


def format_dfa(d: Dfa) -> str:
    out = ["dfa", "alphabet " + " ".join(d.alphabet), f"states {d.states}",
           f"initial {d.initial}", " ".join(["final"] + [str(q) for q in sorted(d.finals)])]
    for q, row in enumerate(d.delta):
        for s, r in enumerate(row):
            out.append(f"trans {q} {d.alphabet[s]} {r}")
    return "\n".join(out) + "\n"


class _RegexParser:
    # expr := term ('|' term)* ; term := factor* ; factor := atom '*'*
    # atom := letter | '(' expr ')' | '{' word (',' word)* '}' ; '()' is the empty word
    def __init__(self, text: str, alphabet: tuple[str, ...]):
        self.text = text.replace(" ", "")
        self.pos = 0
        self.alphabet = alphabet

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def eat(self, ch):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r} at position {self.pos} in {self.text!r}")
        self.pos += 1

    def expr(self) -> Dfa:
        d = self.term()
        while self.peek() == "|":
            self.pos += 1
            d = union(d, self.term())
        return d

    def term(self) -> Dfa:
        d = from_finite_set([""], self.alphabet)
        while self.peek() is not None and self.peek() not in "|)":
            d = concat(d, self.factor())
        return d

    def factor(self) -> Dfa:
        d = self.atom()
        while self.peek() == "*":
            self.pos += 1
            d = star(d)
        return d

    def atom(self) -> Dfa:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            d = self.expr()
            self.eat(")")
            return d
        if ch == "{":
            self.pos += 1
            end = self.text.index("}", self.pos)
            words = self.text[self.pos:end].split(",")
            self.pos = end + 1
            words = ["" if w in ("", "eps") else w for w in words]
            return from_finite_set(words, self.alphabet)
        if ch is not None and ch in self.alphabet:
            self.pos += 1
            return from_finite_set([ch], self.alphabet)
        raise ParseError(f"unexpected {ch!r} at position {self.pos} in {self.text!r}")


def parse_regex(text: str, alphabet: Sequence[str] | None = None) -> Dfa:
    """Minimal regular expressions: letters, ``|``, juxtaposition, ``*``,
    parentheses and finite sets ``{ab,ba}``; result is minimized."""
    if alphabet is None:
        alphabet = tuple(sorted({c for c in text.replace("eps", "") if c not in "|*(){}, "}))
    p = _RegexParser(text, tuple(alphabet))
    d = p.expr()
    if p.pos != len(p.text):
        raise ParseError(f"trailing input at position {p.pos} in {p.text!r}")
    return minimize(d)
