"""Rees extensions, local Rees extensions and Rees decomposition trees."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import config
from .errors import CIsUnit, DoesNotGenerate, MorphismViolation, NDoesNotShrink, SizeGuardExceeded
from .green import subgroups_satisfy
from .localdiv import LocalDivisor, lambda_c, local_divisor
from .monoid import (
    Division,
    FiniteMonoid,
    MonoidMorphism,
    VarietyPredicate,
    check_morphism,
    compose,
    divides,
    find_isomorphism,
    is_group,
    minimal_generating_set,
    submonoid_generated,
    units,
)


@dataclass(frozen=True)
class ReesExtension:
    """``N ∪ (N × L × N)``; indices below |N| are N, the rest encode
    triples ``(n1, m, n2)`` in lexicographic order."""

    n_part: FiniteMonoid
    l_part: FiniteMonoid
    rho: tuple[int, ...]
    monoid: FiniteMonoid
    # set for local Rees extensions only
    parent: FiniteMonoid | None = None
    c: int | None = None
    n_members: tuple[int, ...] | None = None
    local: LocalDivisor | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return self.monoid.size

    def encode(self, n1: int, m: int, n2: int) -> int:
        k, l = self.n_part.size, self.l_part.size
        return k + (n1 * l + m) * k + n2

    def decode(self, x: int) -> int | tuple[int, int, int]:
        k, l = self.n_part.size, self.l_part.size
        if x < k:
            return x
        r = x - k
        n2 = r % k
        n1, m = divmod(r // k, l)
        return n1, m, n2


def rees_size(n: int, l: int) -> int:
    return n + n * n * l


def rees_extension(n: FiniteMonoid, l: FiniteMonoid, rho: Sequence[int],
                   cap: int | None = None) -> ReesExtension:
    rho = tuple(int(r) for r in rho)
    if len(rho) != n.size or any(not 0 <= r < l.size for r in rho):
        raise ValueError(f"rho must map each of the {n.size} elements of N into [0, {l.size})")
    cap = config.REES_CAP if cap is None else cap
    k, q = n.size, l.size
    size = rees_size(k, q)
    if size > cap:
        raise SizeGuardExceeded("Rees extension", size, cap)
    tn, tl, rh = n.table, l.table, np.array(rho, dtype=np.int64)
    idx = np.arange(k * k * q)
    n2s = idx % k
    n1s = (idx // k) // q
    ms = (idx // k) % q

    def enc(a, b, c):
        return k + (a * q + b) * k + c

    table = np.empty((size, size), dtype=np.int64)
    table[:k, :k] = tn
    # n * (n1, m, n2) = (n n1, m, n2)
    table[:k, k:] = enc(tn[:, n1s], ms[None, :], n2s[None, :])
    # (n1, m, n2) * n' = (n1, m, n2 n')
    table[k:, :k] = enc(n1s[:, None], ms[:, None], tn[n2s, :])
    # (n1, m, n2) * (n1', m', n2') = (n1, m rho(n2 n1') m', n2')
    middle = rh[tn[n2s[:, None], n1s[None, :]]]
    prod = tl[tl[ms[:, None], middle], ms[None, :]]
    table[k:, k:] = enc(n1s[:, None], prod, n2s[None, :])
    return ReesExtension(n, l, rho, FiniteMonoid(table, n.identity))


def local_rees_extension(m: FiniteMonoid, n_gens, c: int, cap: int | None = None) -> ReesExtension:
    """``Rees(N, M_c, x -> cxc)`` for a proper submonoid N that, with c, generates M."""
    if c in units(m):
        raise CIsUnit(f"{c} is a unit")
    members = submonoid_generated(m, n_gens)
    if len(members) == m.size:
        raise NDoesNotShrink("N is all of M")
    if len(submonoid_generated(m, set(n_gens) | {c})) != m.size:
        raise DoesNotGenerate(f"N and {c} do not generate M")
    n_monoid, order = m.restrict(members)
    ld = local_divisor(m, c)
    t = m.table
    rho = [ld.position[int(t[t[c, x], c])] for x in order]
    ext = rees_extension(n_monoid, ld.monoid, rho, cap)
    return ReesExtension(ext.n_part, ext.l_part, ext.rho, ext.monoid,
                         parent=m, c=c, n_members=tuple(order), local=ld)


def local_rees_division(ext: ReesExtension) -> MonoidMorphism:
    """The surjection ``LocRees(N, M_c) -> M``: ``n -> n``, ``(n1, m, n2) -> n1 m n2``.

    It is total and unital, so it witnesses M as a divisor of the extension.
    """
    if ext.parent is None:
        raise ValueError("not a local Rees extension")
    m, ld, order = ext.parent, ext.local, ext.n_members
    t = m.table
    mapping = {}
    for x in range(ext.size):
        d = ext.decode(x)
        if isinstance(d, int):
            mapping[x] = order[d]
        else:
            n1, mid, n2 = d
            mapping[x] = int(t[t[order[n1], ld.carrier[mid]], order[n2]])
    phi = MonoidMorphism(ext.monoid, m, tuple(range(ext.size)), mapping, unital=True)
    check = check_morphism(phi)
    if not check or not phi.is_surjective():
        raise MorphismViolation(f"LocRees -> M: {check.reason or 'not surjective'} {check.witness}")
    return phi


def subgroup_preservation_check(n: FiniteMonoid, l: FiniteMonoid, rho: Sequence[int],
                                variety: VarietyPredicate) -> bool:
    """Whether 'N and L in H-bar implies Rees(N, L, rho) in H-bar' held here."""
    if not (subgroups_satisfy(n, variety) and subgroups_satisfy(l, variety)):
        return True
    return subgroups_satisfy(rees_extension(n, l, rho).monoid, variety)


# -- decomposition trees ---------------------------------------------------------

STRATEGIES = ("first-nonunit", "max-shrink")


@dataclass
class ReesTreeNode:
    label: FiniteMonoid
    c: int | None = None
    n_members: tuple[int, ...] | None = None
    left: ReesTreeNode | None = None     # the submonoid N
    right: ReesTreeNode | None = None    # the local divisor at c

    @property
    def kind(self) -> str:
        return "leaf" if self.left is None else "inner"

    def node_count(self) -> int:
        if self.left is None:
            return 1
        return 1 + self.left.node_count() + self.right.node_count()

    def walk(self, path: str = "root"):
        yield path, self
        if self.left is not None:
            yield from self.left.walk(path + ".N")
            yield from self.right.walk(path + ".Mc")


def _split(m: FiniteMonoid, strategy: str) -> tuple[int, frozenset[int]]:
    gens = minimal_generating_set(m)
    unit_set = units(m)
    candidates = [g for g in gens if g not in unit_set]
    if strategy == "first-nonunit":
        c = candidates[0]
        return c, submonoid_generated(m, [g for g in gens if g != c])
    if strategy == "max-shrink":
        best = None
        for c in candidates:
            n = submonoid_generated(m, [g for g in gens if g != c])
            cost = len(n) + local_divisor(m, c).size
            if best is None or cost < best[0]:
                best = (cost, c, n)
        return best[1], best[2]
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def decomposition_tree(m: FiniteMonoid, strategy: str = "first-nonunit") -> ReesTreeNode:
    """Split a non-group M into a proper submonoid N and a local divisor M_c
    at a non-unit generator c, recursively, until every leaf is a group."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if is_group(m):
        return ReesTreeNode(m)
    c, members = _split(m, strategy)
    n_monoid, order = m.restrict(members)
    ld = local_divisor(m, c)
    return ReesTreeNode(
        m, c, tuple(order),
        left=decomposition_tree(n_monoid, strategy),
        right=decomposition_tree(ld.monoid, strategy),
    )


def non_units(m: FiniteMonoid) -> int:
    return m.size - len(units(m))


def node_bound_ratio(m: FiniteMonoid, tree: ReesTreeNode) -> float:
    """Node count divided by 3^(n/3), n the number of non-units."""
    return tree.node_count() / 3 ** (non_units(m) / 3)


@dataclass(frozen=True)
class Finding:
    path: str
    check: str
    status: str  # pass | fail | unverified
    detail: str = ""


@dataclass
class TreeReport:
    findings: list[Finding]
    node_count: int
    non_units: int

    @property
    def ok(self) -> bool:
        return all(f.status != "fail" for f in self.findings)

    @property
    def fully_verified(self) -> bool:
        return all(f.status == "pass" for f in self.findings)

    def status_of(self, path: str) -> list[Finding]:
        return [f for f in self.findings if f.path == path]

    @property
    def bound_ratio(self) -> float:
        return self.node_count / 3 ** (self.non_units / 3)


def _same_monoid(a: FiniteMonoid, b: FiniteMonoid) -> dict[int, int] | None:
    if a == b:
        return {x: x for x in a.elements()}
    return find_isomorphism(a, b)


def _relabel(phi: MonoidMorphism, iso: dict[int, int], target: FiniteMonoid) -> MonoidMorphism:
    return MonoidMorphism(phi.domain, target, phi.carrier,
                          {x: iso[y] for x, y in phi.mapping.items()}, phi.unital)


def verify_decomposition_tree(m: FiniteMonoid, tree: ReesTreeNode, guard: int | None = None) -> TreeReport:
    """Check the root label, that leaves are groups dividing M, and that each
    inner node divides the local Rees extension of its children.

    Divisibility is confirmed by an explicit, checked witness morphism where
    the tree structure provides one, and by exhaustive search when the
    larger monoid is within ``guard``. Anything neither route settles is
    reported as unverified.
    """
    guard = config.divides_guard() if guard is None else guard
    findings: list[Finding] = []
    root_ok = tree.label == m or _same_monoid(tree.label, m) is not None
    findings.append(Finding("root", "root-label", "pass" if root_ok else "fail",
                            "" if root_ok else "root label differs from M"))
    # witness from M onto each node label, when the path is consistent
    start = None
    if root_ok:
        iso = _same_monoid(m, tree.label)
        start = MonoidMorphism(m, tree.label, tuple(m.elements()), iso, unital=True)

    def visit(node: ReesTreeNode, path: str, to_node: MonoidMorphism | None):
        if node.left is None:
            grp = is_group(node.label)
            findings.append(Finding(path, "leaf-group", "pass" if grp else "fail",
                                    f"size {node.label.size}"))
            findings.append(_leaf_divides(m, node.label, to_node, guard, path))
            return
        label = node.label
        try:
            ext = local_rees_extension(label, node.n_members, node.c)
        except Exception as exc:
            findings.append(Finding(path, "local-rees", "fail", f"{type(exc).__name__}: {exc}"))
            visit(node.left, path + ".N", None)
            visit(node.right, path + ".Mc", None)
            return
        n_monoid, _ = label.restrict(ext.n_members)
        iso_n = _same_monoid(n_monoid, node.left.label)
        iso_c = _same_monoid(ext.local.monoid, node.right.label)
        consistent = iso_n is not None and iso_c is not None
        findings.append(Finding(path, "children", "pass" if consistent else "fail",
                                f"|N|={n_monoid.size} |M_c|={ext.local.size}"))
        findings.append(_inner_divides(label, ext, guard, path))
        to_left = to_right = None
        if consistent and to_node is not None:
            incl = MonoidMorphism(label, node.left.label, ext.n_members,
                                  {x: iso_n[p] for p, x in enumerate(ext.n_members)}, unital=True)
            to_left = compose(to_node, incl)
            lam = lambda_c(label, node.c, ext.local)
            to_right = compose(to_node, _relabel(lam, iso_c, node.right.label))
        visit(node.left, path + ".N", to_left)
        visit(node.right, path + ".Mc", to_right)

    visit(tree, "root", start)
    return TreeReport(findings, tree.node_count(), non_units(m))


def _leaf_divides(m, leaf, witness, guard, path) -> Finding:
    details = []
    if witness is not None:
        check = check_morphism(witness)
        if check and witness.is_surjective():
            return Finding(path, "leaf-divides-root", "pass", "composed witness")
        details.append(f"composed witness invalid: {check.reason or 'not surjective'}")
    if m.size <= guard:
        res = divides(leaf, m, guard=guard)
        return Finding(path, "leaf-divides-root", "pass" if res else "fail", "exhaustive")
    return Finding(path, "leaf-divides-root", "unverified", "; ".join(details) or "beyond guard")


def _inner_divides(label, ext, guard, path) -> Finding:
    try:
        local_rees_division(ext)
    except MorphismViolation as exc:
        if ext.size <= guard:
            res: Division = divides(label, ext.monoid, guard=guard)
            return Finding(path, "divides-locrees", "pass" if res else "fail", "exhaustive")
        return Finding(path, "divides-locrees", "unverified", str(exc))
    detail = f"witness onto M' from |LocRees|={ext.size}"
    if ext.size <= guard:
        res = divides(label, ext.monoid, guard=guard)
        if not res:
            return Finding(path, "divides-locrees", "fail", "exhaustive search disagrees with witness")
        detail += "; exhaustive agrees"
    return Finding(path, "divides-locrees", "pass", detail)


def render_tree(tree: ReesTreeNode, report: TreeReport | None = None) -> str:
    status: dict[str, list[Finding]] = {}
    if report is not None:
        for f in report.findings:
            status.setdefault(f.path, []).append(f)
    lines = []
    for path, node in tree.walk():
        depth = path.count(".")
        pad = "  " * depth
        name = path.rsplit(".", 1)[-1]
        if node.kind == "leaf":
            text = f"{pad}{name}: leaf size={node.label.size}"
        else:
            text = (f"{pad}{name}: inner size={node.label.size} c={node.c} "
                    f"|N|={node.left.label.size} |M_c|={node.right.label.size}")
        if path in status:
            text += " [" + ", ".join(f"{f.check}={f.status}" for f in status[path]) + "]"
        lines.append(text)
    return "\n".join(lines)


def bound_reference(n_nonunits: int) -> int:
    return math.ceil(3 ** (n_nonunits / 3))
