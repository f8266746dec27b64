"""Local divisors ``cM ∩ Mc`` with the product ``xc ∘ cy = xcy``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MorphismViolation, StrictnessViolation, WitnessDisagreement
from .monoid import FiniteMonoid, MonoidMorphism, check_morphism, units


@dataclass(frozen=True)
class LocalDivisor:
    parent: FiniteMonoid
    c: int
    carrier: tuple[int, ...]   # parent indices, sorted
    monoid: FiniteMonoid       # on positions 0..len(carrier)-1
    position: dict[int, int]

    @property
    def size(self) -> int:
        return len(self.carrier)

    @property
    def identity(self) -> int:
        return self.position[self.c]

    def circ(self, z1: int, z2: int) -> int:
        """Product of two carrier elements, in parent indices."""
        p = self.monoid.mul(self.position[z1], self.position[z2])
        return self.carrier[p]


def local_divisor(m: FiniteMonoid, c: int) -> LocalDivisor:
    t = m.table
    left_mult = set(t[:, c].tolist())   # Mc
    right_mult = set(t[c, :].tolist())  # cM
    carrier = tuple(sorted(left_mult & right_mult))
    position = {z: p for p, z in enumerate(carrier)}
    cols = np.array(carrier, dtype=np.int64)
    table = np.empty((len(carrier), len(carrier)), dtype=np.int64)
    for p, z1 in enumerate(carrier):
        witnesses = np.flatnonzero(t[:, c] == z1)
        block = t[np.ix_(witnesses, cols)]  # x*z2 for every witness x of z1
        if (block != block[0]).any():
            i, j = np.argwhere(block != block[0])[0]
            raise WitnessDisagreement(
                f"c={c}: {witnesses[0]}*{carrier[j]} != {witnesses[i]}*{carrier[j]}"
            )
        for q, v in enumerate(block[0].tolist()):
            if v not in position:
                raise WitnessDisagreement(f"c={c}: product {v} leaves cM ∩ Mc")
            table[p, q] = position[v]
    return LocalDivisor(m, c, carrier, FiniteMonoid(table, position[c]), position)


def lambda_c(m: FiniteMonoid, c: int, ld: LocalDivisor | None = None) -> MonoidMorphism:
    """The surjection ``x -> cx`` from ``{x : cx ∈ M_c}`` onto ``M_c``."""
    ld = local_divisor(m, c) if ld is None else ld
    t = m.table
    domain = tuple(x for x in m.elements() if int(t[c, x]) in ld.position)
    mapping = {x: ld.position[int(t[c, x])] for x in domain}
    phi = MonoidMorphism(m, ld.monoid, domain, mapping, unital=True)
    check = check_morphism(phi)
    if not check:
        raise MorphismViolation(f"lambda_{c}: {check.reason} at {check.witness}")
    if not phi.is_surjective():
        raise MorphismViolation(f"lambda_{c} is not surjective")
    return phi


def unit_isomorphism(m: FiniteMonoid, c: int, ld: LocalDivisor | None = None) -> MonoidMorphism:
    """For a unit ``c``, ``x -> cx`` is an isomorphism ``M -> M_c``."""
    phi = lambda_c(m, c, ld)
    if len(phi.carrier) != m.size or not phi.is_injective():
        raise MorphismViolation(f"x -> {c}x is not bijective on M")
    return phi


@dataclass(frozen=True)
class StrictnessEntry:
    c: int
    size: int
    unit: bool


def strictness_report(m: FiniteMonoid) -> list[StrictnessEntry]:
    unit_set = units(m)
    out = []
    for c in m.elements():
        ld = local_divisor(m, c)
        entry = StrictnessEntry(c, ld.size, c in unit_set)
        if not entry.unit and (ld.size >= m.size or m.identity in ld.position):
            raise StrictnessViolation(f"non-unit {c} has |M_c| = {ld.size}")
        out.append(entry)
    return out

