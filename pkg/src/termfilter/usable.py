"""Usable rules: the classical closure, the filtered variant, and the
propositional encoding that lets the SAT search pick the usable set itself."""

from __future__ import annotations

from collections import deque

from . import atoms as A
from .encoder import EMPTY_CTX, Ctx, EncodingContext
from .formula import Formula
from .orders import ArgumentFiltering
from .terms import Rule, Symbol, Term, Trs, Var, functions


def usable_rules(pairs: Trs, rules: Trs) -> tuple[Rule, ...]:
    """Rules reachable from the right-hand sides of ``pairs``: all rules of
    every symbol occurring there, closed under right-hand sides of rules
    already usable.  Returned in rule order."""
    chosen: set[Rule] = set()
    seen: set[Symbol] = set()
    queue: deque[Symbol] = deque()
    for p in pairs.rules:
        queue.extend(functions(p.rhs))
    while queue:
        f = queue.popleft()
        if f in seen:
            continue
        seen.add(f)
        for rule in rules.rules_for(f):
            if rule not in chosen:
                chosen.add(rule)
                queue.extend(functions(rule.rhs))
    return tuple(r for r in rules.rules if r in chosen)


def defined_usable_symbols(pairs: Trs, rules: Trs) -> tuple[Symbol, ...]:
    """Root symbols of the usable rules, in rule order."""
    out: list[Symbol] = []
    for rule in usable_rules(pairs, rules):
        if rule.root not in out:
            out.append(rule.root)
    return tuple(out)


def usable_rules_mod_pi(pairs: Trs, rules: Trs, pi: ArgumentFiltering) -> tuple[Rule, ...]:
    """Usable rules restricted by a filtering: reachability only descends
    into argument positions the filtering keeps (or collapses onto), and the
    rules of a symbol are removed from the system before recursing."""
    all_rules = rules.rules
    memo: dict[tuple[Term, frozenset[Rule]], frozenset[Rule]] = {}

    def go(t: Term, remaining: frozenset[Rule]) -> frozenset[Rule]:
        if isinstance(t, Var):
            return frozenset()
        key = (t, remaining)
        hit = memo.get(key)
        if hit is not None:
            return hit
        own = frozenset(r for r in remaining if r.root == t.fun)
        rest = remaining - own
        out = set(own)
        for rule in own:
            out |= go(rule.rhs, rest)
        for i in pi.kept(t.fun):
            out |= go(t.args[i - 1], rest)
        result = frozenset(out)
        memo[key] = result
        return result

    found: set[Rule] = set()
    for p in pairs.rules:
        found |= go(p.rhs, frozenset(all_rules))
    return tuple(r for r in all_rules if r in found)


def omega(pairs: Trs, rules: Trs, ctx: EncodingContext) -> Formula:
    """Propositional usable-rules tracking.

    For every pair's right-hand side, descending only through kept argument
    positions, reaching a defined symbol ``f`` asserts its flag ``u_f``;
    and each flag implies the weak orientation of that symbol's rules.
    """
    b = ctx.builder
    parts: list[Formula] = []
    for p in pairs.rules:
        parts.append(_omega_term(p.rhs, frozenset(rules.rules), rules, ctx, EMPTY_CTX))
    for f in defined_usable_symbols(pairs, rules):
        obligations = [ctx.tau_ge(r.lhs, r.rhs) for r in rules.rules_for(f)]
        parts.append(b.implies(b.atom(A.Usable(f)), b.and_(obligations)))
    return b.and_(parts)


def _omega_term(t: Term, remaining: frozenset[Rule], rules: Trs,
                ctx: EncodingContext, ectx: Ctx) -> Formula:
    b = ctx.builder
    if isinstance(t, Var):
        return b.TRUE
    f = t.fun
    own = [r for r in rules.rules_for(f) if r in remaining]
    if not own:
        return b.and_([
            ctx._guarded(ectx, A.ArgIn(f, i),
                         lambda c, i=i: _omega_term(t.args[i - 1], remaining, rules, ctx, c))
            for i in range(1, f.arity + 1)
        ])
    rest = remaining - set(own)

    def body(c: Ctx) -> list[Formula]:
        out = [_omega_term(r.rhs, rest, rules, ctx, c) for r in own]
        out.extend(
            ctx._guarded(c, A.ArgIn(f, i),
                         lambda c2, i=i: _omega_term(t.args[i - 1], rest, rules, ctx, c2))
            for i in range(1, f.arity + 1))
        return out

    return ctx._with_literals(ectx, [(A.Usable(f), True)], body)
