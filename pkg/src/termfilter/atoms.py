"""Atomic constraints: precedence comparisons, filtering shape, usable flags."""

from __future__ import annotations

from dataclasses import dataclass

from .terms import Symbol


@dataclass(frozen=True)
class PoGt:
    """``left`` strictly above ``right`` in the precedence."""

    left: Symbol
    right: Symbol


@dataclass(frozen=True)
class PoEq:
    """``left`` and ``right`` equivalent in the precedence (quasi mode only)."""

    left: Symbol
    right: Symbol


@dataclass(frozen=True)
class ListP:
    """The filtering keeps ``fun`` as a (possibly empty) argument list."""

    fun: Symbol


@dataclass(frozen=True)
class ArgIn:
    """Position ``pos`` of ``fun`` survives the filtering."""

    fun: Symbol
    pos: int


@dataclass(frozen=True)
class CollapsesTo:
    """The filtering collapses ``fun`` to its argument at ``pos``."""

    fun: Symbol
    pos: int


@dataclass(frozen=True)
class Usable:
    """The rules of ``fun`` must be oriented weakly."""

    fun: Symbol


@dataclass(frozen=True)
class StrictPair:
    """Marker: pair number ``index`` decreases strictly."""

    index: int


Atom = PoGt | PoEq | ListP | ArgIn | CollapsesTo | Usable | StrictPair


def describe(atom: Atom) -> str:
    if isinstance(atom, PoGt):
        return f"(gt {atom.left.display} {atom.right.display})"
    if isinstance(atom, PoEq):
        return f"(eq {atom.left.display} {atom.right.display})"
    if isinstance(atom, ListP):
        return f"(list {atom.fun.display})"
    if isinstance(atom, ArgIn):
        return f"(in {atom.fun.display} {atom.pos})"
    if isinstance(atom, CollapsesTo):
        return f"(collapse {atom.fun.display} {atom.pos})"
    if isinstance(atom, Usable):
        return f"(usable {atom.fun.display})"
    if isinstance(atom, StrictPair):
        return f"(strict {atom.index})"
    return repr(atom)
