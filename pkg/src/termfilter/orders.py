"""Executable semantics of lexicographic path orders and argument filterings.

This module is the ground truth the SAT pipeline is checked against: it
decides ``s > t`` / ``s >= t`` for *concrete* precedences and filterings by
direct case analysis, with no propositional machinery involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .terms import App, Symbol, Term, Var, symbol_key

STRICT = "strict"
QUASI = "quasi"
_MODES = (STRICT, QUASI)


class Precedence:
    """Symbol ranks; a higher rank is greater in the precedence.

    In quasi mode, equal ranks make two symbols equivalent.  In strict mode
    distinct symbols with equal rank are simply incomparable.
    """

    def __init__(self, ranks: Mapping[Symbol, int]):
        self._ranks = {symbol_key(f): r for f, r in ranks.items()}

    def rank(self, f: Symbol) -> int:
        try:
            return self._ranks[symbol_key(f)]
        except KeyError:
            raise ValueError(f"no rank for symbol {f.display}") from None

    def gt(self, f: Symbol, g: Symbol) -> bool:
        return self.rank(f) > self.rank(g)

    def equivalent(self, f: Symbol, g: Symbol, mode: str) -> bool:
        if symbol_key(f) == symbol_key(g):
            return True
        if mode == STRICT:
            return False
        return self.rank(f) == self.rank(g)

    def items(self) -> Iterator[tuple[tuple[str, bool], int]]:
        return iter(sorted(self._ranks.items()))

    def __repr__(self) -> str:
        entries = ", ".join(f"{name}{'#' if tup else ''}={r}"
                            for (name, tup), r in self.items())
        return f"Precedence({entries})"


@dataclass(frozen=True)
class Keep:
    """Keep the listed argument positions (1-based, strictly increasing)."""

    positions: tuple[int, ...] = ()


@dataclass(frozen=True)
class Collapse:
    """Replace the whole application by the argument at ``position``."""

    position: int


FilterSpec = Keep | Collapse


class ArgumentFiltering:
    """Per-symbol choice of kept argument positions or a collapsing position."""

    def __init__(self, mapping: Mapping[Symbol, FilterSpec]):
        self._specs: dict[tuple[str, bool], FilterSpec] = {}
        self._symbols: dict[tuple[str, bool], Symbol] = {}
        for f, spec in mapping.items():
            if isinstance(spec, Collapse):
                if f.arity < 1:
                    raise ValueError(f"cannot collapse nullary symbol {f.display}")
                if not 1 <= spec.position <= f.arity:
                    raise ValueError(f"collapse position {spec.position} out of range "
                                     f"for {f.display}/{f.arity}")
            else:
                if any(not 1 <= i <= f.arity for i in spec.positions):
                    raise ValueError(f"kept position out of range for {f.display}/{f.arity}")
                if any(a >= b for a, b in zip(spec.positions, spec.positions[1:])):
                    raise ValueError("kept positions must be strictly increasing")
            self._specs[symbol_key(f)] = spec
            self._symbols[symbol_key(f)] = f

    @staticmethod
    def identity(symbols: Iterable[Symbol]) -> ArgumentFiltering:
        return ArgumentFiltering(
            {f: Keep(tuple(range(1, f.arity + 1))) for f in symbols})

    def get(self, f: Symbol) -> FilterSpec:
        try:
            return self._specs[symbol_key(f)]
        except KeyError:
            raise ValueError(f"no filtering for symbol {f.display}") from None

    def kept(self, f: Symbol) -> tuple[int, ...]:
        """Positions ``i`` with ``pi(f) ∋ i`` (kept list entries, or the
        collapse target itself)."""
        spec = self.get(f)
        return (spec.position,) if isinstance(spec, Collapse) else spec.positions

    def items(self) -> list[tuple[Symbol, FilterSpec]]:
        return [(self._symbols[k], self._specs[k]) for k in sorted(self._specs)]

    def __repr__(self) -> str:
        parts = []
        for f, spec in self.items():
            if isinstance(spec, Collapse):
                parts.append(f"pi({f.display})={spec.position}")
            else:
                parts.append(f"pi({f.display})={list(spec.positions)}")
        return "ArgumentFiltering(" + ", ".join(parts) + ")"


def apply_filtering(pi: ArgumentFiltering, t: Term) -> Term:
    """The term mapping induced by a filtering; kept arities shrink."""
    if isinstance(t, Var):
        return t
    spec = pi.get(t.fun)
    if isinstance(spec, Collapse):
        return apply_filtering(pi, t.args[spec.position - 1])
    kept = tuple(apply_filtering(pi, t.args[i - 1]) for i in spec.positions)
    return App(Symbol(t.fun.name, len(kept), t.fun.is_tuple), kept)


def _check_mode(mode: str) -> None:
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")


def terms_equivalent(prec: Precedence, mode: str, s: Term, t: Term) -> bool:
    """Equality of terms up to equivalence of symbols (identity when strict)."""
    _check_mode(mode)
    if isinstance(s, Var) or isinstance(t, Var):
        return s == t
    if s.fun.arity != t.fun.arity or not prec.equivalent(s.fun, t.fun, mode):
        return False
    return all(terms_equivalent(prec, mode, a, b) for a, b in zip(s.args, t.args))


def lpo_gt(prec: Precedence, mode: str, s: Term, t: Term) -> bool:
    """Strict lexicographic path order on plain terms.

    ``s = f(s1..sn) > t`` iff either some ``si >= t``, or ``t = g(t1..tm)``
    with every ``tj`` strictly below ``s`` and ``f`` above ``g`` (or
    equivalent to it with the argument tuples lexicographically decreasing).
    """
    _check_mode(mode)
    memo: dict[tuple[Term, Term], bool] = {}

    def ge(a: Term, b: Term) -> bool:
        return gt(a, b) or terms_equivalent(prec, mode, a, b)

    def lex_gt(ss: tuple[Term, ...], ts: tuple[Term, ...]) -> bool:
        if not ss:
            return False
        if not ts:
            return True
        return gt(ss[0], ts[0]) or (ge(ss[0], ts[0]) and lex_gt(ss[1:], ts[1:]))

    def gt(a: Term, b: Term) -> bool:
        key = (a, b)
        if key not in memo:
            memo[key] = _gt(a, b)
        return memo[key]

    def _gt(a: Term, b: Term) -> bool:
        if isinstance(a, Var):
            return False
        if any(ge(ai, b) for ai in a.args):
            return True
        if isinstance(b, Var):
            return False
        if all(gt(a, bj) for bj in b.args):
            if prec.gt(a.fun, b.fun):
                return True
            if prec.equivalent(a.fun, b.fun, mode) and lex_gt(a.args, b.args):
                return True
        return False

    return gt(s, t)


def lpo_ge(prec: Precedence, mode: str, s: Term, t: Term) -> bool:
    """Weak order: strict order or term equivalence."""
    return lpo_gt(prec, mode, s, t) or terms_equivalent(prec, mode, s, t)


class _FilteredLpo:
    """LPO combined with an argument filtering, decided by direct recursion.

    The case split mirrors the filtered order itself: a collapsed symbol
    stands for its chosen argument, a kept symbol compares root symbols and
    the kept argument tuples.  The weak order differs from the strict one in
    the collapsing cases, in the variable cases, and in its lexicographic
    base case; the inner "all kept arguments below" guards stay strict.
    """

    def __init__(self, prec: Precedence, pi: ArgumentFiltering, mode: str):
        _check_mode(mode)
        self.prec = prec
        self.pi = pi
        self.mode = mode
        self.memo: dict[tuple[str, Term, Term], bool] = {}

    def gt(self, s: Term, t: Term) -> bool:
        key = ("gt", s, t)
        if key not in self.memo:
            self.memo[key] = self._gt(s, t)
        return self.memo[key]

    def ge(self, s: Term, t: Term) -> bool:
        key = ("ge", s, t)
        if key not in self.memo:
            self.memo[key] = self._ge(s, t)
        return self.memo[key]

    def _gt(self, s: Term, t: Term) -> bool:
        if isinstance(s, Var):
            return False
        spec_f = self.pi.get(s.fun)
        if isinstance(spec_f, Collapse):
            if self.gt(s.args[spec_f.position - 1], t):
                return True
        else:
            if any(self.ge(s.args[i - 1], t) for i in spec_f.positions):
                return True
        if isinstance(t, Var):
            return False
        spec_g = self.pi.get(t.fun)
        if isinstance(spec_g, Collapse):
            return self.gt(s, t.args[spec_g.position - 1])
        if isinstance(spec_f, Collapse):
            return False
        return self._roots(s, t, spec_f, spec_g, weak_lex=False)

    def _ge(self, s: Term, t: Term) -> bool:
        if isinstance(s, Var):
            if isinstance(t, Var):
                return s == t
            spec_g = self.pi.get(t.fun)
            if isinstance(spec_g, Collapse):
                return self.ge(s, t.args[spec_g.position - 1])
            return False
        spec_f = self.pi.get(s.fun)
        if isinstance(spec_f, Collapse):
            if self.ge(s.args[spec_f.position - 1], t):
                return True
        else:
            if any(self.ge(s.args[i - 1], t) for i in spec_f.positions):
                return True
        if isinstance(t, Var):
            return False
        spec_g = self.pi.get(t.fun)
        if isinstance(spec_g, Collapse):
            return self.ge(s, t.args[spec_g.position - 1])
        if isinstance(spec_f, Collapse):
            return False
        return self._roots(s, t, spec_f, spec_g, weak_lex=True)

    def _roots(self, s: App, t: App, spec_f: Keep, spec_g: Keep, weak_lex: bool) -> bool:
        if not all(self.gt(s, t.args[j - 1]) for j in spec_g.positions):
            return False
        if self.prec.gt(s.fun, t.fun):
            return True
        if not self.prec.equivalent(s.fun, t.fun, self.mode):
            return False
        ss = tuple(s.args[i - 1] for i in spec_f.positions)
        ts = tuple(t.args[j - 1] for j in spec_g.positions)
        return self._lex_ge(ss, ts) if weak_lex else self._lex_gt(ss, ts)

    def _lex_gt(self, ss: tuple[Term, ...], ts: tuple[Term, ...]) -> bool:
        if not ss:
            return False
        if not ts:
            return True
        return self.gt(ss[0], ts[0]) or (self.ge(ss[0], ts[0]) and self._lex_gt(ss[1:], ts[1:]))

    def _lex_ge(self, ss: tuple[Term, ...], ts: tuple[Term, ...]) -> bool:
        if not ss:
            return not ts
        if not ts:
            return True
        return self.gt(ss[0], ts[0]) or (self.ge(ss[0], ts[0]) and self._lex_ge(ss[1:], ts[1:]))


def lpo_af_gt(prec: Precedence, pi: ArgumentFiltering, mode: str, s: Term, t: Term) -> bool:
    """``s`` strictly above ``t`` in the LPO induced by ``prec`` modulo ``pi``."""
    return _FilteredLpo(prec, pi, mode).gt(s, t)


def lpo_af_ge(prec: Precedence, pi: ArgumentFiltering, mode: str, s: Term, t: Term) -> bool:
    """Weak companion of :func:`lpo_af_gt`."""
    return _FilteredLpo(prec, pi, mode).ge(s, t)
