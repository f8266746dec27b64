"""Brute-force reference implementations used to cross-check the library.

Nothing here imports library algorithms beyond plain data types, so a
disagreement points at one side or the other rather than a shared bug.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


def words(alphabet, max_len: int):
    for n in range(max_len + 1):
        for t in itertools.product(alphabet, repeat=n):
            yield "".join(t)


# -- monoids --------------------------------------------------------------------------

def is_associative(table) -> bool:
    n = len(table)
    return all(table[table[i][j]][k] == table[i][table[j][k]]
               for i in range(n) for j in range(n) for k in range(n))


def mul(m, x, y) -> int:
    return int(m.table[x, y])


def left_ideal(m, x) -> frozenset:
    return frozenset(mul(m, s, x) for s in range(m.size))


def right_ideal(m, x) -> frozenset:
    return frozenset(mul(m, x, s) for s in range(m.size))


def two_sided_ideal(m, x) -> frozenset:
    return frozenset(mul(m, mul(m, s, x), t) for s in range(m.size) for t in range(m.size))


def partition_by(m, key) -> set:
    groups: dict = {}
    for x in range(m.size):
        groups.setdefault(key(x), set()).add(x)
    return {frozenset(g) for g in groups.values()}


def green_partitions(m) -> dict[str, set]:
    lid = [left_ideal(m, x) for x in range(m.size)]
    rid = [right_ideal(m, x) for x in range(m.size)]
    out = {
        "L": partition_by(m, lambda x: lid[x]),
        "R": partition_by(m, lambda x: rid[x]),
        "J": partition_by(m, lambda x: two_sided_ideal(m, x)),
        "H": partition_by(m, lambda x: (lid[x], rid[x])),
    }
    # D as the composite L ∘ R, straight from its definition
    out["D"] = {frozenset(y for y in range(m.size)
                          if any(lid[x] == lid[z] and rid[z] == rid[y] for z in range(m.size)))
                for x in range(m.size)}
    return out


def idempotents(m) -> set:
    return {x for x in range(m.size) if mul(m, x, x) == x}


def units(m) -> set:
    e = m.identity
    return {x for x in range(m.size) if any(mul(m, x, y) == e and mul(m, y, x) == e for y in range(m.size))}


def has_nontrivial_subgroup(m) -> bool:
    # a finite monoid is aperiodic iff x^k = x^(k+1) for some k, for every x
    for x in range(m.size):
        seen = []
        p = x
        while p not in seen:
            seen.append(p)
            p = mul(m, p, x)
        if p != mul(m, p, x):
            return True
    return False


# -- rewriting ------------------------------------------------------------------------

def one_step(rules, w: str) -> set[str]:
    out = set()
    for l, r in rules:
        i = w.find(l)
        while i != -1:
            out.add(w[:i] + r + w[i + len(l):])
            i = w.find(l, i + 1)
    return out


def normal_form_sets(rules):
    """Memoized map from a word to all its irreducible descendants; assumes termination."""
    @lru_cache(maxsize=None)
    def nfs(u: str) -> frozenset:
        nxt = one_step(rules, u)
        if not nxt:
            return frozenset([u])
        return frozenset().union(*(nfs(v) for v in nxt))
    return nfs


def all_normal_forms(rules, w: str) -> set[str]:
    return set(normal_form_sets(tuple(rules))(w))


def unique_normal_forms(rules, alphabet, max_len: int) -> bool:
    """Joinability oracle for any terminating system, length-increasing rules included."""
    nfs = normal_form_sets(tuple(rules))
    return all(len(nfs(w)) == 1 for w in words(alphabet, max_len))


def confluent_up_to(rules, alphabet, max_len: int) -> bool:
    """Every word of length <= max_len has exactly one irreducible descendant.

    Rules must be length-reducing; words are processed by increasing length
    so descendants are always already tabulated.
    """
    nf: dict[str, object] = {}
    for n in range(max_len + 1):
        for t in itertools.product(alphabet, repeat=n):
            w = "".join(t)
            found = None
            for l, r in rules:
                i = w.find(l)
                while i != -1:
                    v = nf[w[:i] + r + w[i + len(l):]]
                    if found is None:
                        found = v
                    elif v != found:
                        return False
                    i = w.find(l, i + 1)
            nf[w] = w if found is None else found
    return True


# -- codes ----------------------------------------------------------------------------

def in_star(word: str, code) -> bool:
    code = tuple(code)
    ok = [False] * (len(word) + 1)
    ok[0] = True
    for i in range(1, len(word) + 1):
        ok[i] = any(len(k) <= i and ok[i - len(k)] and word[i - len(k):i] == k for k in code)
    return ok[len(word)]


def factorizations(word: str, code) -> list[tuple[str, ...]]:
    if word == "":
        return [()]
    out = []
    for k in code:
        if word.startswith(k):
            out += [(k,) + rest for rest in factorizations(word[len(k):], code)]
    return out


def in_power(word: str, code, d: int) -> bool:
    return any(len(f) == d for f in factorizations(word, code))


def sync_delay_holds(code, alphabet, d: int, max_total: int) -> bool:
    """No u, v, w with |uvw| <= max_total, uvw ∈ K*, v ∈ K^d, uv ∉ K*."""
    code = tuple(code)
    star = {w for w in words(alphabet, max_total) if in_star(w, code)}
    for x in star:
        n = len(x)
        for i in range(n + 1):
            for j in range(i, n + 1):
                if x[:j] not in star and in_power(x[i:j], code, d):
                    return False
    return True


def controlled_star_member(word: str, parts, group) -> bool:
    """Some factorization into code words whose labels multiply to 1."""
    label = {k: g for g, ks in parts.items() for k in ks}
    for f in factorizations(word, list(label)):
        acc = group.identity
        for k in f:
            acc = mul(group, acc, label[k])
        if acc == group.identity:
            return True
    return False
