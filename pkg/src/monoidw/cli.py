"""Command-line front end.

Every verb prints a human-readable report followed by a final
``RESULT: ...`` line. Exit status is 0 on success, 1 when a decision verb
answers false, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import codes, config, green, langs, localdiv, rees, rewriting
from .errors import AssocViolation, IdentityViolation, IndexOutOfRange, MonoidwError
from .monoid import (
    FiniteMonoid,
    VarietyPredicate,
    format_monoid,
    format_table,
    idempotents,
    is_aperiodic,
    is_group,
    parse_monoid,
    units,
)


class Failure(Exception):
    """A decision verb answered false."""


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise MonoidwError(f"cannot read {path}: {exc.strerror}") from None


def load_monoid(path: str) -> FiniteMonoid:
    return parse_monoid(_read(path), path)


def load_dfa(path: str) -> langs.Dfa:
    return langs.parse_dfa(_read(path), path)


def load_system(path: str) -> rewriting.SemiThueSystem:
    return rewriting.parse_system(_read(path), path)


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _decide(ok: bool, text: str | None = None) -> None:
    print(f"RESULT: {text if text is not None else _flag(ok)}")
    if not ok:
        raise Failure()


# -- monoid verbs -------------------------------------------------------------------

def cmd_validate(args) -> None:
    try:
        m = load_monoid(args.monoid)
    except (AssocViolation, IdentityViolation, IndexOutOfRange) as exc:
        print(f"invalid: {exc}")
        _decide(False, f"invalid {type(exc).__name__}")
        return
    print(f"valid monoid of size {m.size}, identity {m.identity}")
    print(f"idempotents: {sorted(idempotents(m))}")
    print(f"units: {sorted(units(m))}")
    print(f"group: {_flag(is_group(m))}, aperiodic: {_flag(is_aperiodic(m))}")
    _decide(True, f"valid size={m.size}")


def cmd_green(args) -> None:
    m = load_monoid(args.monoid)
    g = green.green_classes(m)
    for rel in ("L", "R", "J", "H", "D"):
        classes = g.classes(rel)
        print(f"{rel}-classes ({len(classes)}): " + " ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in classes))
    print()
    print(green.render_eggbox(m, g))
    print()
    for e, grp in green.maximal_subgroups(m, g):
        print(f"H({e}) is a group of order {grp.size}")
    same = g.J == g.D
    print(f"RESULT: L={len(g.classes('L'))} R={len(g.classes('R'))} J={len(g.classes('J'))} "
          f"H={len(g.classes('H'))} D={len(g.classes('D'))} J=D={_flag(same)}")


def cmd_localdiv(args) -> None:
    m = load_monoid(args.monoid)
    c = args.c
    if not 0 <= c < m.size:
        raise MonoidwError(f"--c {c} is not an element of a monoid of size {m.size}")
    ld = localdiv.local_divisor(m, c)
    lam = localdiv.lambda_c(m, c, ld)
    print(f"carrier (parent indices): {list(ld.carrier)}")
    print(f"identity: {c}")
    print("product table (parent indices):")
    print(format_table(ld.monoid, [str(z) for z in ld.carrier]))
    print("lambda map x -> cx:")
    for x in lam.carrier:
        print(f"  {x} -> {ld.carrier[lam.mapping[x]]}")
    unit = c in units(m)
    print(f"RESULT: size={ld.size} unit={_flag(unit)}")


def _parse_rho(text: str, n: int, l: int) -> list[int]:
    try:
        vals = [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise MonoidwError(f"--rho must be comma-separated indices, got {text!r}") from None
    if len(vals) != n:
        raise MonoidwError(f"--rho needs {n} values (one per element of N), got {len(vals)}")
    if any(not 0 <= v < l for v in vals):
        raise MonoidwError(f"--rho values must lie in [0, {l})")
    return vals


def cmd_rees(args) -> None:
    n = load_monoid(args.n)
    l = load_monoid(args.l)
    rho = _parse_rho(args.rho, n.size, l.size) if args.rho else [l.identity] * n.size
    ext = rees.rees_extension(n, l, rho)
    m = ext.monoid
    print(f"|N|={n.size} |L|={l.size} rho={list(rho)}")
    print(f"extension: size {m.size}, identity {m.identity}, associative")
    print(f"aperiodic: {_flag(is_aperiodic(m))}, idempotents: {len(idempotents(m))}")
    groups = [grp.size for _, grp in green.maximal_subgroups(m)]
    print(f"maximal subgroup orders: {groups}")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(format_monoid(m))
        print(f"written to {args.output}")
    print(f"RESULT: size={m.size} valid=true")


def cmd_rees_tree(args) -> None:
    m = load_monoid(args.monoid)
    tree = rees.decomposition_tree(m, args.strategy)
    report = rees.verify_decomposition_tree(m, tree) if args.verify else None
    print(rees.render_tree(tree, report))
    n_nonunits = rees.non_units(m)
    print(f"nodes={tree.node_count()} non-units={n_nonunits} "
          f"nodes/3^(n/3)={tree.node_count() / 3 ** (n_nonunits / 3):.3f}")
    leaves_ok = all(is_group(node.label) for _, node in tree.walk() if node.kind == "leaf")
    if report is None:
        print(f"RESULT: nodes={tree.node_count()} leaves-groups={_flag(leaves_ok)}")
        return
    status = "pass" if report.fully_verified else ("fail" if not report.ok else "partial")
    for f in report.findings:
        if f.status != "pass":
            print(f"{f.path}: {f.check} {f.status} {f.detail}")
    _decide(report.ok, f"nodes={tree.node_count()} leaves-groups={_flag(leaves_ok)} verified={status}")


# -- rewriting verbs ---------------------------------------------------------------------

def _gamma(args, s) -> rewriting.WeightFunction | None:
    if getattr(args, "gamma", None):
        return rewriting.parse_weights(args.gamma, s.alphabet)
    return None


def cmd_rw_check(args) -> None:
    s = load_system(args.system)
    gamma = _gamma(args, s)
    if args.order == "weight":
        gamma = gamma or rewriting.WeightFunction.length(s.alphabet)
        order = rewriting.ReductionOrder("weight", gamma)
    else:
        order = rewriting.ReductionOrder(args.order)
    res = rewriting.check_reducing(s, order)
    if not res:
        l, r = res.rule
        print(f"rule {l} -> {rewriting.show(r)} is not {args.order}-reducing")
    else:
        print(f"all {len(s.rules)} rules are {args.order}-reducing")
    _decide(res.ok)


def cmd_rw_nf(args) -> None:
    s = load_system(args.system)
    word = "" if args.word == rewriting.EPS else args.word
    nf = rewriting.normal_form(s, word, _gamma(args, s))
    print(f"{rewriting.show(word)} ->* {rewriting.show(nf)}")
    print(f"RESULT: {rewriting.show(nf)}")


def cmd_rw_confluent(args) -> None:
    s = load_system(args.system)
    res = rewriting.is_confluent(s, _gamma(args, s))
    print(f"critical pairs: {len(rewriting.critical_pairs(s))}")
    if not res:
        cp = res.witness
        a, b = res.normal_forms
        print(f"non-joinable: {rewriting.show(cp.word)} -> {rewriting.show(cp.left)} | {rewriting.show(cp.right)}"
              f" (normal forms {rewriting.show(a)} vs {rewriting.show(b)})")
    _decide(res.confluent)


def cmd_rw_quotient(args) -> None:
    s = load_system(args.system)
    q = rewriting.quotient_monoid(s, _gamma(args, s))
    labels = [rewriting.show(w) for w in q.words]
    print("elements: " + " ".join(labels))
    print(format_table(q.monoid, labels))
    print("letters: " + " ".join(f"{a}->{labels[i]}" for a, i in q.letter_images.items()))
    print(f"aperiodic: {_flag(is_aperiodic(q.monoid))}")
    print(f"RESULT: size={q.monoid.size}")


def cmd_rw_recognizes(args) -> None:
    s = load_system(args.system)
    d = load_dfa(args.dfa)
    ok = rewriting.recognizes(s, d, _gamma(args, s))
    print(f"language is {'a' if ok else 'not a'} union of congruence classes")
    _decide(ok)


# -- codes --------------------------------------------------------------------------------

def cmd_code_prefixfree(args) -> None:
    code = codes.load_code(args.spec)
    res = codes.is_prefix_free(code)
    if not res:
        u, uv = res.witness
        print(f"witness: {u} is a proper prefix of {uv}")
    _decide(res.ok)


def cmd_code_delay(args) -> None:
    code = codes.load_code(args.spec)
    if args.d is not None:
        res = codes.has_sync_delay(code, args.d)
        if not res:
            u, v, w = (rewriting.show(x) for x in res.witness)
            print(f"d={args.d}: false, witness u={u} v={v} w={w}")
        else:
            print(f"d={args.d}: true")
        _decide(res.ok)
        return
    d_max = args.max if args.max is not None else config.SYNC_DELAY_MAX
    found = None
    for d in range(1, d_max + 1):
        res = codes.has_sync_delay(code, d)
        if res:
            print(f"d={d}: true")
            found = d
            break
        u, v, w = (rewriting.show(x) for x in res.witness)
        print(f"d={d}: false, witness u={u} v={v} w={w}")
    _decide(found is not None, f"min-delay={found}" if found is not None else f"none (up to {d_max})")


def cmd_code_cstar(args) -> None:
    spec = codes.load_cstar(args.spec)
    delay = spec.check(args.max)
    d = codes.controlled_star(spec, args.max)
    syn = langs.syntactic_monoid(d)
    print(f"group of order {spec.group.size}, parts {sorted(spec.parts)}, delay {delay}")
    print(langs.format_dfa(d), end="")
    print(f"RESULT: states={d.states} delay={delay} synmon={syn.monoid.size}")


# -- languages -----------------------------------------------------------------------------

def cmd_lang_synmon(args) -> None:
    d = load_dfa(args.dfa)
    syn = langs.syntactic_monoid(d)
    m = syn.monoid
    if m.size <= 20:
        print(format_table(m))
    print("letters: " + " ".join(f"{a}->{i}" for a, i in syn.letter_images.items()))
    print(f"accepting: {sorted(syn.accepting)}")
    print(f"RESULT: size={m.size} group={_flag(is_group(m))} aperiodic={_flag(is_aperiodic(m))}")


def cmd_lang_aperiodic(args) -> None:
    d = load_dfa(args.dfa)
    m = langs.syntactic_monoid(d).monoid
    print(f"syntactic monoid of size {m.size}")
    _decide(is_aperiodic(m))


def cmd_sd_eval(args) -> None:
    text = _read(args.expr) if os.path.exists(args.expr) else args.expr
    base = os.path.dirname(args.expr) if os.path.exists(args.expr) else "."
    e = codes.parse_expression(text, base or ".")
    alphabet = tuple(args.alphabet) if args.alphabet else None
    kind = "SD" if codes.is_sd(e) else "SF" if codes.is_sf(e) else "mixed"
    d = codes.evaluate(e, alphabet)
    syn = langs.syntactic_monoid(d).monoid
    print(f"{kind} expression: {codes.format_expression(e)}")
    print(langs.format_dfa(d), end="")
    summary = f"states={d.states} synmon={syn.size} aperiodic={_flag(is_aperiodic(syn))}"
    if args.verify_hbar:
        variety = VarietyPredicate.from_name(args.verify_hbar)
        if kind != "SD":
            raise MonoidwError("--verify-hbar applies to SD expressions (no complement)")
        ok = codes.verify_sd_in_hbar(e, variety, alphabet)
        _decide(ok, f"{summary} hbar={_flag(ok)}")
        return
    print(f"RESULT: {summary}")


# -- wiring ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monoidw", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("validate", help="check the monoid axioms of a table file")
    s.add_argument("monoid")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("green", help="Green's relations and eggbox diagram")
    s.add_argument("monoid")
    s.set_defaults(func=cmd_green)

    s = sub.add_parser("localdiv", help="local divisor at an element")
    s.add_argument("monoid")
    s.add_argument("--c", type=int, required=True)
    s.set_defaults(func=cmd_localdiv)

    s = sub.add_parser("rees", help="Rees extension Rees(N, L, rho)")
    s.add_argument("n")
    s.add_argument("l")
    s.add_argument("--rho", help="comma-separated images in L of the elements of N (default: identity of L)")
    s.add_argument("--output", help="write the extension in monoid text format")
    s.set_defaults(func=cmd_rees)

    s = sub.add_parser("rees-tree", help="Rees decomposition tree")
    s.add_argument("monoid")
    s.add_argument("--strategy", choices=rees.STRATEGIES, default="first-nonunit")
    s.add_argument("--verify", action="store_true")
    s.set_defaults(func=cmd_rees_tree)

    rw = sub.add_parser("rw", help="semi-Thue systems").add_subparsers(dest="rw_verb", required=True)
    s = rw.add_parser("check", help="check a reduction order")
    s.add_argument("system")
    s.add_argument("--order", choices=rewriting.ReductionOrder.KINDS, required=True)
    s.add_argument("--gamma", help="weights such as a=2,b=1 (weight order)")
    s.set_defaults(func=cmd_rw_check)
    s = rw.add_parser("nf", help="normal form of a word")
    s.add_argument("system")
    s.add_argument("word")
    s.add_argument("--gamma")
    s.set_defaults(func=cmd_rw_nf)
    s = rw.add_parser("confluent", help="critical-pair confluence test")
    s.add_argument("system")
    s.add_argument("--gamma")
    s.set_defaults(func=cmd_rw_confluent)
    s = rw.add_parser("quotient", help="quotient monoid A*/S")
    s.add_argument("system")
    s.add_argument("--gamma")
    s.set_defaults(func=cmd_rw_quotient)
    s = rw.add_parser("recognizes", help="is the language a union of congruence classes")
    s.add_argument("system")
    s.add_argument("dfa")
    s.add_argument("--gamma")
    s.set_defaults(func=cmd_rw_recognizes)

    code = sub.add_parser("code", help="prefix codes").add_subparsers(dest="code_verb", required=True)
    s = code.add_parser("prefixfree")
    s.add_argument("spec")
    s.set_defaults(func=cmd_code_prefixfree)
    s = code.add_parser("delay")
    s.add_argument("spec")
    grp = s.add_mutually_exclusive_group()
    grp.add_argument("--d", type=int)
    grp.add_argument("--max", type=int)
    s.set_defaults(func=cmd_code_delay)
    s = code.add_parser("cstar", help="group-controlled star of a partitioned code")
    s.add_argument("spec")
    s.add_argument("--max", type=int, default=None, help="largest delay to try")
    s.set_defaults(func=cmd_code_cstar)

    lang = sub.add_parser("lang", help="regular languages").add_subparsers(dest="lang_verb", required=True)
    s = lang.add_parser("synmon")
    s.add_argument("dfa")
    s.set_defaults(func=cmd_lang_synmon)
    s = lang.add_parser("aperiodic")
    s.add_argument("dfa")
    s.set_defaults(func=cmd_lang_aperiodic)

    sd = sub.add_parser("sd", help="SD/SF expressions").add_subparsers(dest="sd_verb", required=True)
    s = sd.add_parser("eval")
    s.add_argument("expr", help="expression text or a file containing it")
    s.add_argument("--alphabet", help="letters, e.g. abc (default: letters in the expression)")
    s.add_argument("--verify-hbar", choices=("trivial", "abelian", "allgroups"))
    s.set_defaults(func=cmd_sd_eval)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        args.func(args)
    except Failure:
        return 1
    except (MonoidwError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("RESULT: error")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
