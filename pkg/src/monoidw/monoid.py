"""Finite monoids given by multiplication tables, and maps between them."""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import config
from .errors import (
    AssocViolation,
    IdentityViolation,
    IndexOutOfRange,
    ParseError,
    SizeGuardExceeded,
)


def _find_assoc_violation(t: np.ndarray) -> tuple[int, int, int] | None:
    # row by row keeps memory at O(n^2)
    n = t.shape[0]
    for i in range(n):
        left = t[t[i]]        # left[j, k] = (i*j)*k
        right = t[i][t]       # right[j, k] = i*(j*k)
        bad = np.argwhere(left != right)
        if bad.size:
            j, k = bad[0]
            return i, int(j), int(k)
    return None


class FiniteMonoid:
    """A monoid on the indices ``0..n-1`` with an explicit identity.

    The table is stored row-major: ``table[i, j]`` is the product ``i*j``.
    Instances are immutable; the constructor validates the monoid axioms
    unless ``validate=False`` is passed by a construction that already
    guarantees them.
    """

    __slots__ = ("table", "identity", "_key")

    def __init__(self, table, identity: int, *, validate: bool = True):
        t = np.array(table, dtype=np.int64)
        if t.ndim == 1 and t.size == 0:
            t = t.reshape(0, 0)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise IndexOutOfRange(f"table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        if not 0 <= identity < n:
            raise IndexOutOfRange(f"identity {identity} not in [0, {n})")
        if t.min() < 0 or t.max() >= n:
            bad = np.argwhere((t < 0) | (t >= n))[0]
            raise IndexOutOfRange(
                f"table entry ({bad[0]}, {bad[1]}) = {t[bad[0], bad[1]]} not in [0, {n})"
            )
        t.setflags(write=False)
        self.table = t
        self.identity = int(identity)
        self._key = None
        if validate:
            ar = np.arange(n)
            bad = np.flatnonzero((t[identity] != ar) | (t[:, identity] != ar))
            if bad.size:
                raise IdentityViolation(int(bad[0]))
            hit = _find_assoc_violation(t)
            if hit is not None:
                raise AssocViolation(*hit)

    @property
    def size(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.size

    def elements(self) -> range:
        return range(self.size)

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def product(self, xs: Iterable[int]) -> int:
        acc = self.identity
        for x in xs:
            acc = int(self.table[acc, x])
        return acc

    def power(self, x: int, k: int) -> int:
        acc = self.identity
        for _ in range(k):
            acc = int(self.table[acc, x])
        return acc

    def rows(self) -> list[list[int]]:
        return self.table.tolist()

    def _hashkey(self):
        if self._key is None:
            self._key = (self.identity, self.table.tobytes(), self.size)
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMonoid):
            return NotImplemented
        return self._hashkey() == other._hashkey()

    def __hash__(self) -> int:
        return hash(self._hashkey())

    def __repr__(self) -> str:
        return f"FiniteMonoid(size={self.size}, identity={self.identity})"

    def restrict(self, subset: Iterable[int], identity: int | None = None) -> tuple[FiniteMonoid, list[int]]:
        """Restrict to a closed subset.

        Returns the restricted monoid on positions ``0..k-1`` and the sorted
        list of parent indices (position -> parent index).
        """
        members = sorted(set(subset))
        pos = {x: p for p, x in enumerate(members)}
        if identity is None:
            identity = self.identity
        if identity not in pos:
            raise IdentityViolation(identity)
        sub = self.table[np.ix_(members, members)]
        try:
            t = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub) if sub.size else sub
        except KeyError as exc:
            raise IndexOutOfRange(f"subset not closed: product {exc.args[0]} escapes") from None
        return FiniteMonoid(t, pos[identity]), members


def validate_monoid(table: Sequence[Sequence[int]], identity: int) -> FiniteMonoid:
    return FiniteMonoid(table, identity)


class VarietyPredicate(enum.Enum):
    """The three group varieties used as subgroup constraints."""

    TRIVIAL = "trivial"
    ABELIAN = "abelian"
    ALL_GROUPS = "allgroups"

    def test(self, group: FiniteMonoid) -> bool:
        if self is VarietyPredicate.TRIVIAL:
            return group.size == 1
        if self is VarietyPredicate.ABELIAN:
            return bool((group.table == group.table.T).all())
        return True

    @classmethod
    def from_name(cls, name: str) -> VarietyPredicate:
        key = name.strip().lower().replace("_", "").replace("-", "")
        aliases = {"trivial": cls.TRIVIAL, "1": cls.TRIVIAL, "ap": cls.TRIVIAL,
                   "abelian": cls.ABELIAN, "ab": cls.ABELIAN,
                   "allgroups": cls.ALL_GROUPS, "all": cls.ALL_GROUPS, "g": cls.ALL_GROUPS}
        if key not in aliases:
            raise ValueError(f"unknown variety {name!r}")
        return aliases[key]


@dataclass(frozen=True)
class MonoidMorphism:
    """A map defined on ``carrier``, a subset of the domain's elements.

    ``unital`` declares that the domain identity lies in the carrier and is
    sent to the codomain identity. Maps such as ``x -> cx`` onto a local
    divisor are unital with respect to the local divisor's own identity.
    """

    domain: FiniteMonoid
    codomain: FiniteMonoid
    carrier: tuple[int, ...]
    mapping: dict[int, int] = field(hash=False)
    unital: bool = False

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def image(self) -> frozenset[int]:
        return frozenset(self.mapping.values())

    def is_surjective(self) -> bool:
        return len(self.image()) == self.codomain.size

    def is_injective(self) -> bool:
        return len(self.image()) == len(self.carrier)


@dataclass(frozen=True)
class MorphismCheck:
    ok: bool
    reason: str = ""
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_morphism(phi: MonoidMorphism) -> MorphismCheck:
    """Check carrier closure, multiplicativity and (if declared) unitality."""
    dom, cod = phi.domain, phi.codomain
    carrier = phi.carrier
    cset = set(carrier)
    if set(phi.mapping) != cset:
        return MorphismCheck(False, "mapping keys differ from carrier")
    for x in carrier:
        if not 0 <= x < dom.size:
            return MorphismCheck(False, "carrier element out of range", (x,))
        y = phi.mapping[x]
        if not 0 <= y < cod.size:
            return MorphismCheck(False, "image out of range", (x,))
    for x in carrier:
        for y in carrier:
            xy = dom.mul(x, y)
            if xy not in cset:
                return MorphismCheck(False, "carrier not closed", (x, y))
            if phi.mapping[xy] != cod.mul(phi.mapping[x], phi.mapping[y]):
                return MorphismCheck(False, "not multiplicative", (x, y))
    if phi.unital:
        one = dom.identity
        if one not in cset:
            return MorphismCheck(False, "domain identity not in carrier", (one,))
        if phi.mapping[one] != cod.identity:
            return MorphismCheck(False, "identity not preserved", (one,))
    return MorphismCheck(True)


def identity_morphism(m: FiniteMonoid) -> MonoidMorphism:
    return MonoidMorphism(m, m, tuple(m.elements()), {x: x for x in m.elements()}, unital=True)


def _closure(m: FiniteMonoid, start: Iterable[int], gens: Sequence[int]) -> frozenset[int]:
    seen = set(start)
    queue = deque(seen)
    t = m.table
    while queue:
        x = queue.popleft()
        for g in gens:
            y = int(t[x, g])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def _check_indices(m: FiniteMonoid, xs: Iterable[int]) -> list[int]:
    out = []
    for x in xs:
        if not 0 <= x < m.size:
            raise IndexOutOfRange(f"element {x} not in [0, {m.size})")
        out.append(int(x))
    return out


def submonoid_generated(m: FiniteMonoid, gens: Iterable[int]) -> frozenset[int]:
    gens = sorted(set(_check_indices(m, gens)))
    return _closure(m, [m.identity], gens)


def subsemigroup_generated(m: FiniteMonoid, gens: Iterable[int]) -> frozenset[int]:
    gens = sorted(set(_check_indices(m, gens)))
    return _closure(m, gens, gens)


def idempotents(m: FiniteMonoid) -> frozenset[int]:
    t = m.table
    return frozenset(x for x in m.elements() if t[x, x] == x)


def units(m: FiniteMonoid) -> frozenset[int]:
    t = m.table
    one = m.identity
    right_inv = t == one
    # x is a unit iff some y has xy = yx = 1
    both = right_inv & right_inv.T
    return frozenset(int(x) for x in np.flatnonzero(both.any(axis=1)))


def group_of_units(m: FiniteMonoid) -> tuple[frozenset[int], FiniteMonoid]:
    u = units(m)
    group, _ = m.restrict(u)
    return u, group


def is_group(m: FiniteMonoid) -> bool:
    return len(units(m)) == m.size


def is_unit(m: FiniteMonoid, x: int) -> bool:
    t = m.table
    one = m.identity
    return bool(((t[x] == one) & (t[:, x] == one)).any())


def is_aperiodic(m: FiniteMonoid) -> bool:
    t = m.table
    for x in m.elements():
        p = x  # x^1
        for _ in range(m.size):
            q = int(t[p, x])
            if q == p:
                break
            p = q
        else:
            return False
    return True


def direct_product(m: FiniteMonoid, n: FiniteMonoid, cap: int | None = None) -> FiniteMonoid:
    """Componentwise product; element (i, j) has index ``i*|N| + j``."""
    cap = config.PRODUCT_CAP if cap is None else cap
    size = m.size * n.size
    if size > cap:
        raise SizeGuardExceeded("direct product", size, cap)
    a, b = m.table, n.table
    t = (a[:, None, :, None] * n.size + b[None, :, None, :]).reshape(size, size)
    return FiniteMonoid(t, m.identity * n.size + n.identity, validate=size <= 512)


def minimal_generating_set(m: FiniteMonoid, *, semigroup: bool = False) -> list[int]:
    """Greedy removal in index order from the full element set."""
    gen = subsemigroup_generated if semigroup else submonoid_generated
    full = m.size
    gens = list(m.elements())
    for x in list(gens):
        trial = [g for g in gens if g != x]
        if len(gen(m, trial)) == full:
            gens = trial
    return gens


@dataclass(frozen=True)
class Division:
    divides: bool | None
    witness: MonoidMorphism | None = None

    def __bool__(self) -> bool:
        return bool(self.divides)


def _labelled_closure(m, n, seeds, t_m, t_n):
    """Close the seeds under right multiplication by the seeds, labelling
    each reached element by its value in ``n``. Returns the labels or None
    on a conflict."""
    labels = {}
    for s, g in seeds:
        if labels.get(s, g) != g:
            return None
        labels[s] = g
    queue = deque(labels)
    while queue:
        x = queue.popleft()
        lx = labels[x]
        for s, g in seeds:
            y = int(t_m[x, s])
            ly = int(t_n[lx, g])
            have = labels.get(y)
            if have is None:
                labels[y] = ly
                queue.append(y)
            elif have != ly:
                return None
    return labels


def divides(n: FiniteMonoid, m: FiniteMonoid, *, guard: int | None = None,
            on_guard: str = "raise") -> Division:
    """Decide whether ``n`` is a homomorphic image of a subsemigroup of ``m``.

    Exhaustive: images for a semigroup generating set of ``n`` are chosen in
    ``m`` one at a time, and the labelled Cayley closure must stay
    consistent. On success the witness is a surjective morphism from the
    generated subsemigroup onto ``n``.
    """
    guard = config.divides_guard() if guard is None else guard
    if m.size > guard:
        if on_guard == "unknown":
            return Division(None)
        raise SizeGuardExceeded("divides", m.size, guard)
    if n.size > m.size:
        return Division(False)
    gens_n = minimal_generating_set(n, semigroup=True)
    t_m, t_n = m.table, n.table
    chosen: list[tuple[int, int]] = []

    def search(i: int):
        if i == len(gens_n):
            return _labelled_closure(m, n, chosen, t_m, t_n)
        g = gens_n[i]
        for s in m.elements():
            chosen.append((s, g))
            labels = _labelled_closure(m, n, chosen, t_m, t_n)
            if labels is not None:
                found = search(i + 1)
                if found is not None:
                    return found
            chosen.pop()
        return None

    labels = search(0)
    if labels is None:
        return Division(False)
    carrier = tuple(sorted(labels))
    phi = MonoidMorphism(m, n, carrier, dict(labels), unital=False)
    return Division(True, phi)


def compose(first: MonoidMorphism, second: MonoidMorphism) -> MonoidMorphism:
    """``second`` after ``first``, defined where ``first`` lands in the
    carrier of ``second``."""
    inner = set(second.carrier)
    carrier = tuple(x for x in first.carrier if first.mapping[x] in inner)
    mapping = {x: second.mapping[first.mapping[x]] for x in carrier}
    return MonoidMorphism(first.domain, second.codomain, carrier, mapping,
                          unital=first.unital and second.unital)


def is_isomorphic(a: FiniteMonoid, b: FiniteMonoid) -> bool:
    return find_isomorphism(a, b) is not None


def find_isomorphism(a: FiniteMonoid, b: FiniteMonoid) -> dict[int, int] | None:
    """Backtracking over images of a generating set of ``a``."""
    if a.size != b.size:
        return None
    if len(idempotents(a)) != len(idempotents(b)):
        return None
    gens = minimal_generating_set(a)
    chosen: list[tuple[int, int]] = [(a.identity, b.identity)]

    def search(i):
        labels = _labelled_closure(a, b, chosen, a.table, b.table)
        if labels is None:
            return None
        if i == len(gens):
            if len(labels) == a.size and len(set(labels.values())) == a.size:
                return labels
            return None
        for s in b.elements():
            chosen.append((gens[i], s))
            found = search(i + 1)
            if found is not None:
                return found
            chosen.pop()
        return None

    return search(0)


# -- text format ---------------------------------------------------------------

def parse_monoid(text: str, source: str | None = None) -> FiniteMonoid:
    lines = [(no, raw.strip()) for no, raw in enumerate(text.splitlines(), 1)]
    lines = [(no, s) for no, s in lines if s and not s.startswith("#")]
    it = iter(lines)

    def expect(keyword: str) -> tuple[int, list[str]]:
        try:
            no, s = next(it)
        except StopIteration:
            raise ParseError(f"unexpected end of input, expected '{keyword}'", None, source) from None
        parts = s.split()
        if parts[0] != keyword:
            raise ParseError(f"expected '{keyword}', got {parts[0]!r}", no, source)
        return no, parts[1:]

    no, rest = expect("monoid")
    if len(rest) != 1 or not rest[0].isdigit() or int(rest[0]) < 1:
        raise ParseError("expected 'monoid <n>' with n >= 1", no, source)
    n = int(rest[0])
    no, rest = expect("identity")
    if len(rest) != 1 or not rest[0].isdigit():
        raise ParseError("expected 'identity <i>'", no, source)
    identity = int(rest[0])
    if identity >= n:
        raise ParseError(f"identity {identity} not in [0, {n})", no, source)
    no, rest = expect("table")
    if rest:
        raise ParseError("unexpected tokens after 'table'", no, source)
    rows = []
    for i in range(n):
        try:
            no, s = next(it)
        except StopIteration:
            raise ParseError(f"table has {i} rows, expected {n}", None, source) from None
        parts = s.split()
        if len(parts) != n:
            raise ParseError(f"row {i} has {len(parts)} entries, expected {n}", no, source)
        try:
            row = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"row {i} has a non-integer entry", no, source) from None
        for v in row:
            if not 0 <= v < n:
                raise ParseError(f"entry {v} not in [0, {n})", no, source)
        rows.append(row)
    extra = next(it, None)
    if extra is not None:
        raise ParseError("trailing content after table", extra[0], source)
    return FiniteMonoid(rows, identity)


def format_monoid(m: FiniteMonoid) -> str:
    width = len(str(m.size - 1))
    out = [f"monoid {m.size}", f"identity {m.identity}", "table"]
    for row in m.rows():
        out.append(" ".join(str(v).rjust(width) for v in row))
    return "\n".join(out) + "\n"


def format_table(m: FiniteMonoid, labels: Sequence[str] | None = None) -> str:
    labels = [str(x) for x in m.elements()] if labels is None else list(labels)
    w = max(len(s) for s in labels)
    head = " " * w + " | " + " ".join(s.rjust(w) for s in labels)
    out = [head, "-" * len(head)]
    for i, row in enumerate(m.rows()):
        out.append(labels[i].rjust(w) + " | " + " ".join(labels[v].rjust(w) for v in row))
    return "\n".join(out)


def all_maps(domain_size: int, codomain_size: int):
    return itertools.product(range(codomain_size), repeat=domain_size)


def transformation_monoid(generators: Sequence[Sequence[int]], degree: int,
                          guard: int | None = None) -> tuple[FiniteMonoid, list[tuple[int, ...]], list[int]]:
    """Monoid of maps on ``range(degree)`` generated under composition.

    Maps act on the right: the product ``x*y`` applies ``x`` first, so a word
    ``uv`` of letters acts as ``u`` followed by ``v``. Elements are numbered
    in BFS order from the identity, generators tried in the given order.
    Returns the monoid, the maps (by index), and the index of each generator.
    """
    guard = config.MONOID_GUARD if guard is None else guard
    gens = [tuple(int(q) for q in g) for g in generators]
    for g in gens:
        if len(g) != degree or any(not 0 <= q < degree for q in g):
            raise IndexOutOfRange(f"generator {g} is not a map on {degree} points")
    ident = tuple(range(degree))
    index = {ident: 0}
    elems = [ident]
    parent = [-1]
    letter = [-1]
    right: list[list[int]] = []
    i = 0
    while i < len(elems):
        x = elems[i]
        row = []
        for a, g in enumerate(gens):
            y = tuple(g[q] for q in x)
            k = index.get(y)
            if k is None:
                k = len(elems)
                if k >= guard:
                    raise SizeGuardExceeded("transformation monoid", k + 1, guard)
                index[y] = k
                elems.append(y)
                parent.append(i)
                letter.append(a)
            row.append(k)
        right.append(row)
        i += 1
    size = len(elems)
    r = np.array(right, dtype=np.int64).reshape(size, len(gens))
    table = np.empty((size, size), dtype=np.int64)
    table[:, 0] = np.arange(size)
    for j in range(1, size):
        table[:, j] = r[table[:, parent[j]], letter[j]]
    gen_idx = [index[g] for g in gens]
    return FiniteMonoid(table, 0, validate=size <= 300), elems, gen_idx
