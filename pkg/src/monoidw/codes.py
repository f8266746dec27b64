"""Prefix codes, synchronization delay, the group-controlled star, and
evaluation of SD/SF expressions."""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import config, langs
from .errors import (
    DelayNotCertified,
    MonoidwError,
    NotInClass,
    NotPrefixFree,
    ParseError,
    PartsNotDisjoint,
    PreconditionNotCertified,
)
from .green import subgroups_satisfy
from .langs import Dfa
from .monoid import FiniteMonoid, VarietyPredicate, is_group, parse_monoid


@dataclass(frozen=True)
class CodeSpec:
    """A set of non-empty words, given either as a finite list or by a DFA."""

    alphabet: tuple[str, ...]
    words: frozenset[str] | None = None
    dfa: Dfa | None = None

    def __post_init__(self):
        if (self.words is None) == (self.dfa is None):
            raise ValueError("give exactly one of words or dfa")
        if self.words is not None:
            if "" in self.words:
                raise ValueError("a code cannot contain the empty word")
            bad = {a for w in self.words for a in w} - set(self.alphabet)
            if bad:
                raise ValueError(f"symbols {sorted(bad)} not in alphabet")
        else:
            if self.dfa.initial in self.dfa.finals:
                raise ValueError("a code cannot contain the empty word")
            if set(self.dfa.alphabet) - set(self.alphabet):
                raise ValueError("DFA alphabet exceeds the code alphabet")

    @classmethod
    def finite(cls, words: Iterable[str], alphabet: Iterable[str] | None = None) -> CodeSpec:
        words = list(words)
        if len(set(words)) != len(words):
            raise ValueError("duplicate code words")
        if alphabet is None:
            alphabet = sorted({a for w in words for a in w})
        return cls(tuple(alphabet), words=frozenset(words))

    @classmethod
    def regular(cls, dfa: Dfa, alphabet: Iterable[str] | None = None) -> CodeSpec:
        alphabet = dfa.alphabet if alphabet is None else tuple(alphabet)
        return cls(tuple(alphabet), dfa=dfa)

    def to_dfa(self, alphabet: Sequence[str] | None = None) -> Dfa:
        alphabet = self.alphabet if alphabet is None else tuple(alphabet)
        if self.words is not None:
            return langs.minimize(langs.from_finite_set(sorted(self.words), alphabet))
        return langs.minimize(langs.extend_alphabet(self.dfa, alphabet))

    def with_alphabet(self, alphabet: Sequence[str]) -> CodeSpec:
        alphabet = tuple(alphabet)
        if self.words is not None:
            return CodeSpec(alphabet, words=self.words)
        return CodeSpec(alphabet, dfa=langs.extend_alphabet(self.dfa, alphabet))


@dataclass(frozen=True)
class PrefixCheck:
    ok: bool
    witness: tuple[str, str] | None = None   # (u, uv), both in K

    def __bool__(self) -> bool:
        return self.ok


def is_prefix_free(code: CodeSpec) -> PrefixCheck:
    if code.words is not None:
        ws = sorted(code.words)
        for u, w in zip(ws, ws[1:]):
            if w.startswith(u):
                return PrefixCheck(False, (u, w))
        return PrefixCheck(True)
    k = code.to_dfa()
    nonempty = langs.complement(langs.from_finite_set([""], k.alphabet))
    w = langs.shortest_word(langs.intersection(k, langs.concat(k, nonempty)))
    if w is None:
        return PrefixCheck(True)
    u = next(w[:i] for i in range(1, len(w)) if k.accepts(w[:i]))
    return PrefixCheck(False, (u, w))


def code_star(code: CodeSpec) -> Dfa:
    return langs.star(code.to_dfa())


@dataclass(frozen=True)
class DelayResult:
    ok: bool
    d: int
    witness: tuple[str, str, str] | None = None   # (u, v, w): uvw ∈ K*, v ∈ K^d, uv ∉ K*

    def __bool__(self) -> bool:
        return self.ok


def has_sync_delay(code: CodeSpec, d: int) -> DelayResult:
    """Decide whether every ``uvw ∈ K*`` with ``v ∈ K^d`` has ``uv ∈ K*``.

    Searches the product of the K* automaton with the K^d automaton for a
    word ``uvw`` that violates the condition: the u/v and v/w boundaries are
    guessed, uv must be rejected by K* while v is accepted by K^d, and uvw
    must be accepted by K*. The search is breadth-first, so the returned
    witness has minimal total length.
    """
    if d < 1:
        raise ValueError("delay must be a positive integer")
    pf = is_prefix_free(code)
    if not pf:
        raise NotPrefixFree(*pf.witness)
    k = code.to_dfa()
    kstar = langs.minimize(langs.star(k))
    kd = langs.minimize(langs.power(k, d))
    sigma = range(len(k.alphabet))
    start = (0, kstar.initial, -1)
    prev: dict[tuple, tuple | None] = {start: None}
    dist = {start: 0}
    queue = deque([start])
    goal = None
    while queue:
        node = queue.popleft()
        phase, q, p = node
        if phase == 2 and q in kstar.finals:
            goal = node
            break
        moves = []
        if phase == 0:
            moves.append(((1, q, kd.initial), None))
            moves += [((0, kstar.delta[q][s], -1), s) for s in sigma]
        elif phase == 1:
            if p in kd.finals and q not in kstar.finals:
                moves.append(((2, q, -1), None))
            moves += [((1, kstar.delta[q][s], kd.delta[p][s]), s) for s in sigma]
        else:
            moves += [((2, kstar.delta[q][s], -1), s) for s in sigma]
        for nxt, s in moves:
            cost = dist[node] + (0 if s is None else 1)
            if nxt not in dist or cost < dist[nxt]:
                dist[nxt] = cost
                prev[nxt] = (node, s)
                if s is None:
                    queue.appendleft(nxt)
                else:
                    queue.append(nxt)
    if goal is None:
        return DelayResult(True, d)
    parts = [[], [], []]
    node = goal
    while prev[node] is not None:
        before, s = prev[node]
        if s is not None:
            parts[node[0]].append(k.alphabet[s])
        node = before
    u, v, w = ("".join(reversed(x)) for x in parts)
    return DelayResult(False, d, (u, v, w))


def min_sync_delay(code: CodeSpec, d_max: int = config.SYNC_DELAY_MAX) -> int | None:
    for d in range(1, d_max + 1):
        if has_sync_delay(code, d):
            return d
    return None


# -- group-controlled star ---------------------------------------------------------------

@dataclass(frozen=True)
class ControlledStarSpec:
    group: FiniteMonoid
    parts: Mapping[int, CodeSpec] = field(hash=False)
    alphabet: tuple[str, ...] = ()

    def __post_init__(self):
        if not is_group(self.group):
            raise ValueError("the controlling monoid must be a group")
        for g in self.parts:
            if not 0 <= g < self.group.size:
                raise ValueError(f"part label {g} is not a group element")
        if not self.alphabet:
            letters = set()
            for part in self.parts.values():
                letters |= set(part.alphabet)
            object.__setattr__(self, "alphabet", tuple(sorted(letters)))

    def part_dfas(self) -> dict[int, Dfa]:
        return {g: part.to_dfa(self.alphabet) for g, part in sorted(self.parts.items())}

    def union_code(self) -> CodeSpec:
        dfas = list(self.part_dfas().values())
        total = langs.empty(self.alphabet)
        for d in dfas:
            total = langs.union(total, d)
        return CodeSpec.regular(langs.minimize(total), self.alphabet)

    def check(self, d_max: int | None = None) -> int:
        """Validate disjointness, prefix-freeness and bounded delay; return
        the least delay found."""
        d_max = config.SYNC_DELAY_MAX if d_max is None else d_max
        dfas = self.part_dfas()
        keys = sorted(dfas)
        for i, g in enumerate(keys):
            for h in keys[i + 1:]:
                w = langs.shortest_word(langs.intersection(dfas[g], dfas[h]))
                if w is not None:
                    raise PartsNotDisjoint(g, h, w)
        union = self.union_code()
        pf = is_prefix_free(union)
        if not pf:
            raise NotPrefixFree(*pf.witness)
        d = min_sync_delay(union, d_max)
        if d is None:
            raise DelayNotCertified(d_max)
        return d


def _coreachable(d: Dfa) -> set[int]:
    back: dict[int, set[int]] = {}
    for q, row in enumerate(d.delta):
        for r in row:
            back.setdefault(r, set()).add(q)
    live = set(d.finals)
    stack = list(live)
    while stack:
        q = stack.pop()
        for p in back.get(q, ()):
            if p not in live:
                live.add(p)
                stack.append(p)
    return live


def controlled_star(spec: ControlledStarSpec, d_max: int | None = None) -> Dfa:
    """DFA for the code sequences ``u_1 ... u_k`` (``u_i ∈ K_{g_i}``) whose
    labels multiply to the group identity.

    The automaton runs all part automata in parallel on the current code
    word and keeps the product of the labels of completed code words. As
    the union is a prefix code, a code word ends at the first accepting
    position, where the accumulator is multiplied by that part's label.
    """
    spec.check(d_max)
    g_table = spec.group
    dfas = spec.part_dfas()
    labels = sorted(dfas)
    autos = [dfas[g] for g in labels]
    live = [_coreachable(a) for a in autos]
    inits = tuple(a.initial for a in autos)
    sigma = range(len(spec.alphabet))

    index: dict[tuple, int] = {}
    order: list[tuple] = []

    def state(key):
        k = index.get(key)
        if k is None:
            k = len(order)
            if k >= config.STATE_GUARD:
                raise MonoidwError("controlled star automaton too large")
            index[key] = k
            order.append(key)
        return k

    sink = state(("sink",))
    start = state(("boundary", g_table.identity))
    delta: dict[int, list[int]] = {}
    i = 0
    while i < len(order):
        key = order[i]
        row = []
        for s in sigma:
            if key[0] == "sink":
                row.append(sink)
                continue
            tup = inits if key[0] == "boundary" else key[2]
            acc = key[1]
            nxt = tuple(a.delta[q][s] for a, q in zip(autos, tup))
            done = [j for j, (a, q) in enumerate(zip(autos, nxt)) if q in a.finals]
            if done:
                row.append(state(("boundary", g_table.mul(acc, labels[done[0]]))))
            elif all(q not in lv for q, lv in zip(nxt, live)):
                row.append(sink)
            else:
                row.append(state(("inside", acc, nxt)))
        delta[i] = row
        i += 1
    finals = frozenset({index[("boundary", g_table.identity)]})
    d = Dfa(spec.alphabet, start, finals, tuple(tuple(delta[q]) for q in range(len(order))))
    return langs.minimize(d)


# -- expressions ------------------------------------------------------------------------------

@dataclass(frozen=True)
class Finite:
    words: tuple[str, ...]


@dataclass(frozen=True)
class Union:
    items: tuple


@dataclass(frozen=True)
class Concat:
    items: tuple


@dataclass(frozen=True)
class Complement:
    item: object


@dataclass(frozen=True)
class CStar:
    spec: ControlledStarSpec = field(compare=False)
    name: str = ""


def _children(e):
    if isinstance(e, (Union, Concat)):
        return e.items
    if isinstance(e, Complement):
        return (e.item,)
    return ()


def _walk(e):
    yield e
    for c in _children(e):
        yield from _walk(c)


def is_sd(e) -> bool:
    return not any(isinstance(x, Complement) for x in _walk(e))


def is_sf(e) -> bool:
    return not any(isinstance(x, CStar) for x in _walk(e))


def expression_alphabet(e) -> tuple[str, ...]:
    letters = set()
    for x in _walk(e):
        if isinstance(x, Finite):
            letters |= {a for w in x.words for a in w}
        elif isinstance(x, CStar):
            letters |= set(x.spec.alphabet)
    return tuple(sorted(letters))


def evaluate(e, alphabet: Sequence[str] | None = None, d_max: int | None = None) -> Dfa:
    alphabet = tuple(expression_alphabet(e) if alphabet is None else alphabet)

    def ev(x) -> Dfa:
        if isinstance(x, Finite):
            return langs.from_finite_set(x.words, alphabet)
        if isinstance(x, Union):
            out = langs.empty(alphabet)
            for c in x.items:
                out = langs.union(out, ev(c))
            return langs.minimize(out)
        if isinstance(x, Concat):
            out = langs.from_finite_set([""], alphabet)
            for c in x.items:
                out = langs.concat(out, ev(c))
            return out
        if isinstance(x, Complement):
            return langs.minimize(langs.complement(ev(x.item)))
        if isinstance(x, CStar):
            spec = x.spec
            if spec.alphabet != alphabet:
                if set(spec.alphabet) - set(alphabet):
                    raise MonoidwError("controlled star uses symbols outside the expression alphabet")
                spec = ControlledStarSpec(spec.group, dict(spec.parts), alphabet)
            return controlled_star(spec, d_max)
        raise TypeError(f"not an expression node: {x!r}")

    return langs.minimize(ev(e))


def eval_sd(e, alphabet: Sequence[str] | None = None, d_max: int | None = None) -> Dfa:
    if not is_sd(e):
        raise NotInClass("SD expressions have no complement")
    return evaluate(e, alphabet, d_max)


def eval_sf(e, alphabet: Sequence[str] | None = None) -> Dfa:
    if not is_sf(e):
        raise NotInClass("SF expressions have no controlled star")
    return evaluate(e, alphabet)


def verify_sd_in_hbar(e, variety: VarietyPredicate, alphabet: Sequence[str] | None = None) -> bool:
    """Whether the syntactic monoid of an SD expression has all its
    subgroups in the given group variety. Every controlled star must be
    over a group from that variety."""
    for x in _walk(e):
        if isinstance(x, CStar) and not variety.test(x.spec.group):
            raise PreconditionNotCertified(f"controlled star {x.name or ''} uses a group outside {variety.value}")
    d = eval_sd(e, alphabet)
    return subgroups_satisfy(langs.syntactic_monoid(d).monoid, variety)


def format_expression(e) -> str:
    if isinstance(e, Finite):
        return "(finite" + "".join(" " + (w or "eps") for w in e.words) + ")"
    if isinstance(e, Union):
        return "(union " + " ".join(format_expression(c) for c in e.items) + ")"
    if isinstance(e, Concat):
        return "(concat " + " ".join(format_expression(c) for c in e.items) + ")"
    if isinstance(e, Complement):
        return "(complement " + format_expression(e.item) + ")"
    if isinstance(e, CStar):
        return f"(cstar {e.name or '<spec>'})"
    raise TypeError(e)


# -- parsing ----------------------------------------------------------------------------------

def _tokens(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_expression(text: str, base_dir: str = ".") -> object:
    """Prefix syntax: ``(union e ...)``, ``(concat e ...)``, ``(complement e)``,
    ``(finite w ...)`` with ``eps`` for the empty word, ``(cstar path)``."""
    toks = _tokens("\n".join(line.split("#", 1)[0] for line in text.splitlines()))
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(toks):
            raise ParseError("unexpected end of expression")
        pos += 1
        return toks[pos - 1]

    def node():
        tok = take()
        if tok != "(":
            raise ParseError(f"expected '(' but got {tok!r}")
        head = take()
        args = []
        while pos < len(toks) and toks[pos] != ")":
            args.append(take() if head in ("finite", "cstar") else node())
        if take() != ")":
            raise ParseError("missing ')'")
        if head == "finite":
            if "(" in args:
                raise ParseError("finite takes words only")
            return Finite(tuple("" if w == "eps" else w for w in args))
        if head == "union":
            return Union(tuple(args))
        if head == "concat":
            return Concat(tuple(args))
        if head == "complement":
            if len(args) != 1:
                raise ParseError("complement takes one argument")
            return Complement(args[0])
        if head == "cstar":
            if len(args) != 1:
                raise ParseError("cstar takes one spec path")
            path = args[0] if os.path.isabs(args[0]) else os.path.join(base_dir, args[0])
            return CStar(load_cstar(path), args[0])
        raise ParseError(f"unknown operator {head!r}")

    e = node()
    if pos != len(toks):
        raise ParseError(f"trailing tokens after expression: {' '.join(toks[pos:])}")
    return e


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _relative(base: str, path: str) -> str:
    return path if os.path.isabs(path) else os.path.join(base, path)


def parse_code(text: str, base_dir: str = ".", source: str | None = None) -> CodeSpec:
    """``code`` header, optional ``alphabet a b``, then one of
    ``words w1 w2 ...``, ``dfa <path>`` or ``regex <expr>``."""
    alphabet = None
    body = None
    header = False
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        key, _, rest = s.partition(" ")
        rest = rest.strip()
        if not header:
            if s != "code":
                raise ParseError("expected 'code' header", no, source)
            header = True
            continue
        if body is not None:
            raise ParseError("only one code body allowed", no, source)
        if key == "alphabet":
            syms = rest.split()
            if not syms or any(len(a) != 1 for a in syms):
                raise ParseError("alphabet must list single characters", no, source)
            alphabet = tuple(syms)
        elif key == "words":
            words = rest.split()
            if "eps" in words:
                raise ParseError("code words must be non-empty", no, source)
            if len(set(words)) != len(words):
                raise ParseError("duplicate code words", no, source)
            body = ("words", words)
        elif key == "dfa":
            body = ("dfa", langs.parse_dfa(_read(_relative(base_dir, rest)), rest))
        elif key == "regex":
            body = ("regex", rest)
        else:
            raise ParseError(f"unknown keyword {key!r}", no, source)
    if body is None:
        raise ParseError("missing code body (words, dfa or regex)", None, source)
    try:
        if body[0] == "words":
            return CodeSpec.finite(body[1], alphabet)
        if body[0] == "regex":
            return CodeSpec.regular(langs.parse_regex(body[1], alphabet), alphabet)
        d = body[1]
        if alphabet is not None:
            d = langs.extend_alphabet(d, alphabet)
        return CodeSpec.regular(d)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def parse_cstar(text: str, base_dir: str = ".", source: str | None = None) -> ControlledStarSpec:
    group = None
    alphabet: tuple[str, ...] = ()
    parts: dict[int, CodeSpec] = {}
    header = False
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        toks = s.split()
        if not header:
            if toks != ["cstar"]:
                raise ParseError("expected 'cstar' header", no, source)
            header = True
            continue
        if toks[0] == "group" and len(toks) == 2:
            group = parse_monoid(_read(_relative(base_dir, toks[1])), toks[1])
        elif toks[0] == "alphabet":
            alphabet = tuple(toks[1:])
        elif toks[0] == "part" and len(toks) >= 3:
            try:
                g = int(toks[1])
            except ValueError:
                raise ParseError(f"part label {toks[1]!r} is not an element index", no, source) from None
            if g in parts:
                raise ParseError(f"duplicate part {g}", no, source)
            kind = toks[2]
            if kind == "words":
                words = toks[3:]
                if "eps" in words:
                    raise ParseError("code words must be non-empty", no, source)
                parts[g] = CodeSpec.finite(words, alphabet or None)
            elif kind == "dfa" and len(toks) == 4:
                parts[g] = CodeSpec.regular(langs.parse_dfa(_read(_relative(base_dir, toks[3])), toks[3]))
            elif kind == "regex":
                parts[g] = CodeSpec.regular(langs.parse_regex(" ".join(toks[3:]), alphabet or None))
            else:
                raise ParseError("expected 'part <g> words ...' or 'part <g> dfa <path>'", no, source)
        else:
            raise ParseError(f"unrecognized line {s!r}", no, source)
    if group is None:
        raise ParseError("missing 'group <path>' line", None, source)
    if not parts:
        raise ParseError("no parts given", None, source)
    if not alphabet:
        alphabet = tuple(sorted(set().union(*(set(p.alphabet) for p in parts.values()))))
    try:
        return ControlledStarSpec(group, {g: p.with_alphabet(alphabet) for g, p in parts.items()}, alphabet)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def load_cstar(path: str) -> ControlledStarSpec:
    return parse_cstar(_read(path), os.path.dirname(path) or ".", path)


def load_code(path: str) -> CodeSpec:
    return parse_code(_read(path), os.path.dirname(path) or ".", path)
