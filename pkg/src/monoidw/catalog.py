"""Named small monoids and generators for test corpora."""

from __future__ import annotations

import itertools
import random

import numpy as np

from . import config
from .errors import AssocViolation, IdentityViolation, SizeGuardExceeded
from .monoid import FiniteMonoid, direct_product, transformation_monoid


def trivial() -> FiniteMonoid:
    return FiniteMonoid([[0]], 0)


def cyclic_group(n: int) -> FiniteMonoid:
    return FiniteMonoid([[(i + j) % n for j in range(n)] for i in range(n)], 0)


def klein() -> FiniteMonoid:
    z2 = cyclic_group(2)
    return direct_product(z2, z2)


def u1() -> FiniteMonoid:
    """{1, 0} with 0 absorbing; index 0 is the identity."""
    return FiniteMonoid([[0, 1], [1, 1]], 0)


def cyclic_monoid(index: int, period: int) -> FiniteMonoid:
    """Monoid generated by x with x^(index+period) = x^index (elements 1, x, ...)."""
    n = index + period

    def reduce(k: int) -> int:
        if k < n:
            return k
        return index + (k - index) % period

    return FiniteMonoid([[reduce(i + j) for j in range(n)] for i in range(n)], 0)


def full_transformation_monoid(k: int) -> FiniteMonoid:
    maps = list(itertools.product(range(k), repeat=k))
    m, _, _ = transformation_monoid(maps, k)
    return m


def symmetric_group(k: int) -> FiniteMonoid:
    m, _, _ = transformation_monoid(list(itertools.permutations(range(k))), k)
    return m


def maps_on_two_points() -> tuple[FiniteMonoid, dict[str, int]]:
    """All four maps on {0, 1}: identity, swap and the two constants."""
    named = {"id": (0, 1), "swap": (1, 0), "const0": (0, 0), "const1": (1, 1)}
    m, elems, _ = transformation_monoid([named["swap"], named["const0"], named["const1"]], 2)
    where = {name: elems.index(f) for name, f in named.items()}
    return m, where


def brandt_monoid() -> FiniteMonoid:
    """B2 with an identity adjoined, as partial maps on two points (plus a sink)."""
    # points 0, 1; 2 is the undefined sink
    a = (1, 2, 2)
    b = (2, 0, 2)
    m, _, _ = transformation_monoid([a, b], 3)
    return m


def bicyclic_quotient(n: int) -> FiniteMonoid:
    """Partial order-preserving injections on a chain; aperiodic, many J-classes."""
    up = tuple(min(q + 1, n) for q in range(n)) + (n,)
    down = tuple(q - 1 if q > 0 else n for q in range(n)) + (n,)
    m, _, _ = transformation_monoid([up, down], n + 1)
    return m


def named_corpus() -> dict[str, FiniteMonoid]:
    t2, _ = maps_on_two_points()
    return {
        "trivial": trivial(),
        "Z2": cyclic_group(2),
        "Z3": cyclic_group(3),
        "Z4": cyclic_group(4),
        "klein": klein(),
        "U1": u1(),
        "U1xU1": direct_product(u1(), u1()),
        "C(1,2)": cyclic_monoid(1, 2),
        "C(2,1)": cyclic_monoid(2, 1),
        "C(2,3)": cyclic_monoid(2, 3),
        "T2": t2,
        "Z2xU1": direct_product(cyclic_group(2), u1()),
        "B2+": brandt_monoid(),
        "S3": symmetric_group(3),
        "chain3": bicyclic_quotient(3),
        "T3": full_transformation_monoid(3),
    }


def _canonical(table: np.ndarray) -> bytes:
    n = table.shape[0]
    best = None
    for perm in itertools.permutations(range(1, n)):
        p = np.array((0,) + perm)
        inv = np.argsort(p)
        t = p[table[np.ix_(inv, inv)]]
        key = t.tobytes()
        if best is None or key < best:
            best = key
    return best


def all_monoids(n: int) -> list[FiniteMonoid]:
    """Every monoid of order ``n`` up to isomorphism, identity at index 0."""
    if n > 4:
        raise SizeGuardExceeded("all_monoids", n, 4)
    seen: dict[bytes, FiniteMonoid] = {}
    k = n - 1
    for entries in itertools.product(range(n), repeat=k * k):
        t = np.empty((n, n), dtype=np.int64)
        t[0] = np.arange(n)
        t[:, 0] = np.arange(n)
        if k:
            t[1:, 1:] = np.array(entries).reshape(k, k)
        try:
            m = FiniteMonoid(t, 0)
        except (AssocViolation, IdentityViolation):
            continue
        key = _canonical(m.table)
        if key not in seen:
            seen[key] = m
    return [seen[key] for key in sorted(seen)]


def random_transition_monoid(rng: random.Random, states: int, letters: int,
                             max_size: int | None = None) -> FiniteMonoid | None:
    """Transition monoid of a random complete DFA; None if larger than max_size."""
    gens = [tuple(rng.randrange(states) for _ in range(states)) for _ in range(letters)]
    guard = (max_size + 1) if max_size is not None else config.MONOID_GUARD
    try:
        m, _, _ = transformation_monoid(gens, states, guard=guard)
    except SizeGuardExceeded:
        return None
    return m


def random_monoid_corpus(seed: int, count: int, *, max_states: int = 8, letters: int = 2,
                         max_size: int = 60, min_size: int = 1) -> list[FiniteMonoid]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = random_transition_monoid(rng, rng.randint(1, max_states), letters, max_size)
        if m is not None and m.size >= min_size:
            out.append(m)
    return out
