"""Lowering atom-level formulas onto propositional variables.

Each symbol gets a little-endian vector of rank bits, a list flag, and one
variable per argument position; precedence atoms become unsigned bit-vector
comparisons, filtering atoms become (combinations of) flag variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import atoms as A
from .formula import ATOM, AND, FALSE, IFF, IMPLIES, NOT, OR, TRUE, Formula, FormulaBuilder
from .orders import ArgumentFiltering, Collapse, Keep, Precedence
from .terms import Symbol, symbol_key


class EncodingError(RuntimeError):
    """An internal invariant of the encoding pipeline was violated."""


class VarMap:
    """Deterministic numbering of the propositional variables.

    Order: rank bits per symbol (signature order, least significant first),
    then list/argument flags per symbol, then per-pair strictness markers,
    then usability flags; definition variables introduced by the CNF
    transformation come after ``num_reserved``.
    """

    def __init__(self, symbols: Sequence[Symbol], pair_count: int = 0,
                 usable_symbols: Sequence[Symbol] = ()):
        self.symbols = tuple(symbols)
        if len({symbol_key(f) for f in self.symbols}) != len(self.symbols):
            raise ValueError("duplicate symbols in signature")
        self.k = max(1, (len(self.symbols) - 1).bit_length()) if self.symbols else 1
        self._bits: dict[tuple[str, bool], tuple[int, ...]] = {}
        self._list: dict[tuple[str, bool], int] = {}
        self._arg: dict[tuple[str, bool], tuple[int, ...]] = {}
        self._usable: dict[tuple[str, bool], int] = {}
        self.descriptions: dict[int, str] = {}
        v = 0

        def alloc(desc: str) -> int:
            nonlocal v
            v += 1
            self.descriptions[v] = desc
            return v

        for f in self.symbols:
            self._bits[symbol_key(f)] = tuple(
                alloc(f"rank({f.display})[{i + 1}]") for i in range(self.k))
        for f in self.symbols:
            self._list[symbol_key(f)] = alloc(f"list({f.display})")
            self._arg[symbol_key(f)] = tuple(
                alloc(f"keeps({f.display},{i})") for i in range(1, f.arity + 1))
        self._strict = tuple(alloc(f"strict({i})") for i in range(pair_count))
        for f in usable_symbols:
            self._usable[symbol_key(f)] = alloc(f"usable({f.display})")
        self.num_reserved = v

    def bits(self, f: Symbol) -> tuple[int, ...]:
        return self._bits[symbol_key(f)]

    def list_var(self, f: Symbol) -> int:
        return self._list[symbol_key(f)]

    def arg_var(self, f: Symbol, i: int) -> int:
        return self._arg[symbol_key(f)][i - 1]

    def strict_var(self, index: int) -> int:
        return self._strict[index]

    def usable_var(self, f: Symbol) -> int:
        try:
            return self._usable[symbol_key(f)]
        except KeyError:
            raise EncodingError(f"no usability variable for {f.display}") from None


def _bit_gt(b: FormulaBuilder, fb: Sequence[int], gb: Sequence[int]) -> Formula:
    """Unsigned comparison of two little-endian bit vectors."""
    form = b.and_([b.atom(fb[0]), b.not_(b.atom(gb[0]))])
    for i in range(1, len(fb)):
        form = b.or_([
            b.and_([b.atom(fb[i]), b.not_(b.atom(gb[i]))]),
            b.and_([b.iff(b.atom(fb[i]), b.atom(gb[i])), form]),
        ])
    return form


def _bit_eq(b: FormulaBuilder, fb: Sequence[int], gb: Sequence[int]) -> Formula:
    return b.and_([b.iff(b.atom(x), b.atom(y)) for x, y in zip(fb, gb)])


def lower_atoms(phi: Formula, vm: VarMap, mode: str, *,
                builder: FormulaBuilder | None = None
                ) -> tuple[Formula, list[Formula], FormulaBuilder]:
    """Translate an atom-level formula into one over integer variables, and
    return the per-symbol structural constraints alongside it."""
    b = builder or FormulaBuilder()
    memo: dict[int, Formula] = {}

    def tr_atom(payload) -> Formula:
        if isinstance(payload, A.PoGt):
            return _bit_gt(b, vm.bits(payload.left), vm.bits(payload.right))
        if isinstance(payload, A.PoEq):
            if mode == "strict":
                raise EncodingError("precedence-equivalence atom in strict mode")
            return _bit_eq(b, vm.bits(payload.left), vm.bits(payload.right))
        if isinstance(payload, A.ListP):
            return b.atom(vm.list_var(payload.fun))
        if isinstance(payload, A.ArgIn):
            return b.atom(vm.arg_var(payload.fun, payload.pos))
        if isinstance(payload, A.CollapsesTo):
            return b.and_([b.not_(b.atom(vm.list_var(payload.fun))),
                           b.atom(vm.arg_var(payload.fun, payload.pos))])
        if isinstance(payload, A.Usable):
            return b.atom(vm.usable_var(payload.fun))
        if isinstance(payload, A.StrictPair):
            return b.atom(vm.strict_var(payload.index))
        raise EncodingError(f"unknown atom {payload!r}")

    def tr(node: Formula) -> Formula:
        hit = memo.get(node.id)
        if hit is not None:
            return hit
        k = node.kind
        if k == TRUE:
            out = b.TRUE
        elif k == FALSE:
            out = b.FALSE
        elif k == ATOM:
            out = tr_atom(node.payload)
        elif k == NOT:
            out = b.not_(tr(node.children[0]))
        elif k == AND:
            out = b.and_([tr(c) for c in node.children])
        elif k == OR:
            out = b.or_([tr(c) for c in node.children])
        elif k == IMPLIES:
            out = b.implies(tr(node.children[0]), tr(node.children[1]))
        elif k == IFF:
            out = b.iff(tr(node.children[0]), tr(node.children[1]))
        else:
            raise EncodingError(f"unknown node kind {k!r}")
        memo[node.id] = out
        return out

    return tr(phi), structural_constraints(vm, b), b


def structural_constraints(vm: VarMap, b: FormulaBuilder) -> list[Formula]:
    """A collapsed symbol points at exactly one argument position: when the
    list flag is off, at least one and at most one argument flag is on."""
    out: list[Formula] = []
    for f in vm.symbols:
        lst = b.atom(vm.list_var(f))
        args = [b.atom(vm.arg_var(f, i)) for i in range(1, f.arity + 1)]
        out.append(b.or_([lst] + args))
        for i in range(len(args)):
            for j in range(i + 1, len(args)):
                out.append(b.or_([lst, b.not_(args[i]), b.not_(args[j])]))
    return out


@dataclass(frozen=True)
class DecodedModel:
    precedence: Precedence
    filtering: ArgumentFiltering
    strict_pairs: tuple[int, ...]
    usable_symbols: tuple[Symbol, ...]


def decode_model(model: Mapping[int, bool], vm: VarMap) -> DecodedModel:
    """Read a precedence, filtering, strict-pair set, and usable set off a
    satisfying assignment.  Ranks are compressed to 1..d preserving order."""
    def val(v: int) -> bool:
        return bool(model.get(v, False))

    raw: dict[Symbol, int] = {}
    for f in vm.symbols:
        raw[f] = sum(1 << i for i, v in enumerate(vm.bits(f)) if val(v)) + 1
    dense = {r: i + 1 for i, r in enumerate(sorted(set(raw.values())))}
    prec = Precedence({f: dense[r] for f, r in raw.items()})

    pi: dict[Symbol, Keep | Collapse] = {}
    for f in vm.symbols:
        kept = tuple(i for i in range(1, f.arity + 1) if val(vm.arg_var(f, i)))
        if val(vm.list_var(f)):
            pi[f] = Keep(kept)
        else:
            if len(kept) != 1:
                raise EncodingError(
                    f"model collapses {f.display} onto {len(kept)} positions")
            pi[f] = Collapse(kept[0])

    stricts = tuple(i for i in range(len(vm._strict)) if val(vm.strict_var(i)))
    usable = tuple(f for f in vm.symbols if symbol_key(f) in vm._usable
                   and val(vm._usable[symbol_key(f)]))
    return DecodedModel(prec, ArgumentFiltering(pi), stricts, usable)
