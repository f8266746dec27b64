"""Green's relations, maximal subgroups and Green's lemma via local divisors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalJDMismatch, MorphismViolation, NotAGroup, NoWitness, NotREquivalent
from .localdiv import LocalDivisor, local_divisor
from .monoid import (
    FiniteMonoid,
    MonoidMorphism,
    VarietyPredicate,
    check_morphism,
    idempotents,
    is_group,
    units,
)


def _partition(rows: np.ndarray) -> tuple[int, ...]:
    ids: dict[bytes, int] = {}
    out = []
    for r in rows:
        out.append(ids.setdefault(r.tobytes(), len(ids)))
    return tuple(out)


def _relabel(labels) -> tuple[int, ...]:
    ids: dict = {}
    return tuple(ids.setdefault(x, len(ids)) for x in labels)


@dataclass(frozen=True)
class GreenClasses:
    """Class ids per element (numbered by first occurrence) and principal ideals."""

    L: tuple[int, ...]
    R: tuple[int, ...]
    J: tuple[int, ...]
    H: tuple[int, ...]
    D: tuple[int, ...]
    left_ideals: tuple[frozenset[int], ...]
    right_ideals: tuple[frozenset[int], ...]
    ideals: tuple[frozenset[int], ...]

    def classes(self, relation: str) -> list[frozenset[int]]:
        labels = getattr(self, relation)
        groups: dict[int, set[int]] = {}
        for x, k in enumerate(labels):
            groups.setdefault(k, set()).add(x)
        return [frozenset(groups[k]) for k in sorted(groups)]

    def cls(self, relation: str, x: int) -> frozenset[int]:
        labels = getattr(self, relation)
        return frozenset(y for y, k in enumerate(labels) if k == labels[x])

    def related(self, relation: str, x: int, y: int) -> bool:
        labels = getattr(self, relation)
        return labels[x] == labels[y]


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def green_classes(m: FiniteMonoid) -> GreenClasses:
    t = m.table
    n = m.size
    left = np.zeros((n, n), dtype=bool)    # left[x, y]: y ∈ Mx
    right = np.zeros((n, n), dtype=bool)   # right[x, y]: y ∈ xM
    for x in range(n):
        left[x, t[:, x]] = True
        right[x, t[x, :]] = True
    # MxM is the union of My over y ∈ xM
    two = np.zeros((n, n), dtype=bool)
    for x in range(n):
        two[x] = left[right[x]].any(axis=0)
    L = _partition(left)
    R = _partition(right)
    J = _partition(two)
    H = _relabel(zip(L, R))
    uf = _UnionFind(n)
    first_l: dict[int, int] = {}
    first_r: dict[int, int] = {}
    for x in range(n):
        uf.union(x, first_l.setdefault(L[x], x))
        uf.union(x, first_r.setdefault(R[x], x))
    D = _relabel(uf.find(x) for x in range(n))
    if D != J:
        raise InternalJDMismatch(f"J={J} D={D}")

    def sets(mat):
        return tuple(frozenset(np.flatnonzero(row).tolist()) for row in mat)

    return GreenClasses(L, R, J, H, D, sets(left), sets(right), sets(two))


def d_by_composition(m: FiniteMonoid, g: GreenClasses | None = None) -> tuple[int, ...]:
    """D as ``x D y iff some z has x L z and z R y``, independent of union-find."""
    g = green_classes(m) if g is None else g
    n = m.size
    L = np.array(g.L)
    R = np.array(g.R)
    rows = np.zeros((n, n), dtype=bool)
    for x in range(n):
        zs = np.flatnonzero(L == L[x])
        rows[x] = np.isin(R, R[zs])
    return _partition(rows)


def h_class(m: FiniteMonoid, s: int, g: GreenClasses | None = None) -> frozenset[int]:
    g = green_classes(m) if g is None else g
    return g.cls("H", s)


def maximal_subgroups(m: FiniteMonoid, g: GreenClasses | None = None) -> list[tuple[int, FiniteMonoid]]:
    g = green_classes(m) if g is None else g
    out = []
    for e in sorted(idempotents(m)):
        members = g.cls("H", e)
        try:
            group, _ = m.restrict(members, identity=e)
        except Exception as exc:  # restriction fails only if H(e) is not a monoid
            raise NotAGroup(f"H({e}): {exc}") from exc
        if not is_group(group):
            raise NotAGroup(f"H({e}) is not a group")
        out.append((e, group))
    return out


def subgroups_satisfy(m: FiniteMonoid, variety: VarietyPredicate) -> bool:
    if variety is VarietyPredicate.ALL_GROUPS:
        return True
    return all(variety.test(group) for _, group in maximal_subgroups(m))


@dataclass(frozen=True)
class GreensLemmaIso:
    source: LocalDivisor
    target: LocalDivisor
    multiplier: int
    side: str                 # "right" (t = s*v) or "left" (t = v*s)
    morphism: MonoidMorphism  # on local-divisor positions

    def parent_map(self) -> dict[int, int]:
        """The same map in parent indices."""
        return {self.source.carrier[p]: self.target.carrier[q] for p, q in self.morphism.mapping.items()}


def greens_lemma_iso(m: FiniteMonoid, s: int, t: int, g: GreenClasses | None = None) -> GreensLemmaIso:
    """Isomorphism ``M_s -> M_t`` by right multiplication (s R t) or left (s L t).

    The lowest-index multiplier is used; the result is verified to be a
    bijective, ∘-multiplicative map sending s to t.
    """
    g = green_classes(m) if g is None else g
    tab = m.table
    if g.related("R", s, t):
        side = "right"
        hits = np.flatnonzero(tab[s, :] == t)
    elif g.related("L", s, t):
        side = "left"
        hits = np.flatnonzero(tab[:, s] == t)
    else:
        raise NotREquivalent(f"{s} and {t} are neither R- nor L-related")
    if hits.size == 0:
        raise NoWitness(f"no multiplier taking {s} to {t}")
    v = int(hits[0])
    src, dst = local_divisor(m, s), local_divisor(m, t)
    mapping = {}
    for p, z in enumerate(src.carrier):
        w = int(tab[z, v]) if side == "right" else int(tab[v, z])
        if w not in dst.position:
            raise MorphismViolation(f"{z} is sent outside M_{t}")
        mapping[p] = dst.position[w]
    phi = MonoidMorphism(src.monoid, dst.monoid, tuple(range(src.size)), mapping, unital=True)
    check = check_morphism(phi)
    if not check or not phi.is_injective() or not phi.is_surjective():
        raise MorphismViolation(f"multiplication by {v} is not an isomorphism M_{s} -> M_{t}: {check.reason}")
    return GreensLemmaIso(src, dst, v, side, phi)


def units_of_local_divisor_equal_h_class(m: FiniteMonoid, s: int, g: GreenClasses | None = None) -> bool:
    """Compare the units of ``M_s`` with ``H(s)`` as subsets of ``M``, and check
    that ``H(s)`` under ∘ is a group."""
    ld = local_divisor(m, s)
    unit_positions = units(ld.monoid)
    as_parent = frozenset(ld.carrier[p] for p in unit_positions)
    if as_parent != h_class(m, s, g):
        return False
    group, _ = ld.monoid.restrict(unit_positions, identity=ld.identity)
    return is_group(group)


def idempotent_group_isomorphism(m: FiniteMonoid, e: int, f: int,
                                 g: GreenClasses | None = None) -> dict[int, int]:
    """Green's lemma for D-related idempotents: compose ``M_e -> M_z -> M_f``
    along ``e R z L f`` and restrict to ``H(e)``. Verified as a group
    isomorphism ``H(e) -> H(f)`` under the multiplication of ``M``."""
    g = green_classes(m) if g is None else g
    if not g.related("D", e, f):
        raise NotREquivalent(f"{e} and {f} are not D-related")
    z = min(x for x in m.elements() if g.related("R", e, x) and g.related("L", x, f))
    first = greens_lemma_iso(m, e, z, g).parent_map()
    second = greens_lemma_iso(m, z, f, g).parent_map()
    he, hf = g.cls("H", e), g.cls("H", f)
    iso = {x: second[first[x]] for x in he}
    if set(iso.values()) != hf:
        raise MorphismViolation(f"composite does not map H({e}) onto H({f})")
    for x in he:
        for y in he:
            if iso[m.mul(x, y)] != m.mul(iso[x], iso[y]):
                raise MorphismViolation(f"composite not multiplicative at ({x}, {y})")
    return iso


def render_eggbox(m: FiniteMonoid, g: GreenClasses | None = None, labels=None) -> str:
    """D-classes as grids: rows are R-classes, columns L-classes; '*' marks
    H-classes containing an idempotent."""
    g = green_classes(m) if g is None else g
    labels = [str(x) for x in m.elements()] if labels is None else list(labels)
    idem = idempotents(m)
    blocks = []
    for d_class in g.classes("D"):
        members = sorted(d_class)
        r_ids = list(dict.fromkeys(g.R[x] for x in members))
        l_ids = list(dict.fromkeys(g.L[x] for x in members))
        cells = []
        for r in r_ids:
            row = []
            for l in l_ids:
                h = [x for x in members if g.R[x] == r and g.L[x] == l]
                text = ",".join(labels[x] for x in h)
                if any(x in idem for x in h):
                    text = "*" + text
                row.append(text)
            cells.append(row)
        width = max(len(c) for row in cells for c in row)
        sep = "+" + "+".join("-" * (width + 2) for _ in l_ids) + "+"
        lines = [f"D-class {{{','.join(labels[x] for x in members)}}}", sep]
        for row in cells:
            lines.append("|" + "|".join(" " + c.ljust(width) + " " for c in row) + "|")
            lines.append(sep)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)
