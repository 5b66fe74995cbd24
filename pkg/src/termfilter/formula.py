"""Hash-consed boolean formula DAGs with light structural simplification.

Nodes are created through a :class:`FormulaBuilder`.  With sharing enabled,
structurally equal subformulas are the same object, so equality is identity
and a formula is a DAG rather than a tree.  With simplification enabled the
builder folds constants, flattens nested conjunctions/disjunctions, removes
duplicate children, and collapses complementary ones.  Both switches can be
turned off to measure what they buy.
"""

from __future__ import annotations

from typing import Any, Callable, Hashable, Iterable, Iterator

TRUE = "true"
FALSE = "false"
ATOM = "atom"
NOT = "not"
AND = "and"
OR = "or"
IMPLIES = "implies"
IFF = "iff"


class Formula:
    __slots__ = ("kind", "payload", "children", "id")

    def __init__(self, kind: str, payload: Hashable, children: tuple["Formula", ...],
                 node_id: int):
        self.kind = kind
        self.payload = payload
        self.children = children
        self.id = node_id

    def __repr__(self) -> str:
        if self.kind == ATOM:
            return f"<n{self.id} atom {self.payload!r}>"
        return f"<n{self.id} {self.kind}/{len(self.children)}>"


class FormulaBuilder:
    """Factory for formula nodes; one builder per encoding session."""

    def __init__(self, simplify: bool = True, share: bool = True):
        self.simplify = simplify
        self.share = share
        self._intern: dict[tuple, Formula] = {}
        self._count = 0
        self.TRUE = self._fresh(TRUE, None, ())
        self.FALSE = self._fresh(FALSE, None, ())

    def _fresh(self, kind: str, payload: Hashable, children: tuple[Formula, ...]) -> Formula:
        node = Formula(kind, payload, children, self._count)
        self._count += 1
        return node

    def _node(self, kind: str, payload: Hashable, children: tuple[Formula, ...]) -> Formula:
        if not self.share:
            return self._fresh(kind, payload, children)
        key = (kind, payload, tuple(c.id for c in children))
        node = self._intern.get(key)
        if node is None:
            node = self._fresh(kind, payload, children)
            self._intern[key] = node
        return node

    @property
    def node_count(self) -> int:
        return self._count

    def constant(self, value: bool) -> Formula:
        return self.TRUE if value else self.FALSE

    def atom(self, payload: Hashable) -> Formula:
        return self._node(ATOM, payload, ())

    def not_(self, a: Formula) -> Formula:
        if self.simplify:
            if a is self.TRUE:
                return self.FALSE
            if a is self.FALSE:
                return self.TRUE
            if a.kind == NOT:
                return a.children[0]
        return self._node(NOT, None, (a,))

    def and_(self, children: Iterable[Formula]) -> Formula:
        return self._nary(AND, children)

    def or_(self, children: Iterable[Formula]) -> Formula:
        return self._nary(OR, children)

    def _nary(self, kind: str, children: Iterable[Formula]) -> Formula:
        children = tuple(children)
        if not self.simplify:
            return self._node(kind, None, children)
        absorbing = self.FALSE if kind == AND else self.TRUE
        neutral = self.TRUE if kind == AND else self.FALSE
        flat: list[Formula] = []
        for c in children:
            if c is absorbing:
                return absorbing
            if c is neutral:
                continue
            if c.kind == kind:
                flat.extend(c.children)
            else:
                flat.append(c)
        uniq: list[Formula] = []
        seen: set[int] = set()
        for c in flat:
            if c.id not in seen:
                seen.add(c.id)
                uniq.append(c)
        for c in uniq:
            if c.kind == NOT and c.children[0].id in seen:
                return absorbing
        if not uniq:
            return neutral
        if len(uniq) == 1:
            return uniq[0]
        uniq.sort(key=lambda n: n.id)
        return self._node(kind, None, tuple(uniq))

    def implies(self, a: Formula, b: Formula) -> Formula:
        if self.simplify:
            if a is self.TRUE:
                return b
            if a is self.FALSE or b is self.TRUE:
                return self.TRUE
            if b is self.FALSE:
                return self.not_(a)
            if a is b:
                return self.TRUE
        return self._node(IMPLIES, None, (a, b))

    def iff(self, a: Formula, b: Formula) -> Formula:
        if self.simplify:
            if a is self.TRUE:
                return b
            if b is self.TRUE:
                return a
            if a is self.FALSE:
                return self.not_(b)
            if b is self.FALSE:
                return self.not_(a)
            if a is b:
                return self.TRUE
            if (a.kind == NOT and a.children[0] is b) or (b.kind == NOT and b.children[0] is a):
                return self.FALSE
            if a.id > b.id:
                a, b = b, a
        return self._node(IFF, None, (a, b))


def evaluate(f: Formula, atom_value: Callable[[Any], bool]) -> bool:
    """Evaluate a formula under a total assignment given as a function on
    atom payloads."""
    memo: dict[int, bool] = {}

    def ev(n: Formula) -> bool:
        v = memo.get(n.id)
        if v is not None:
            return v
        k = n.kind
        if k == TRUE:
            v = True
        elif k == FALSE:
            v = False
        elif k == ATOM:
            v = bool(atom_value(n.payload))
        elif k == NOT:
            v = not ev(n.children[0])
        elif k == AND:
            v = all(ev(c) for c in n.children)
        elif k == OR:
            v = any(ev(c) for c in n.children)
        elif k == IMPLIES:
            v = (not ev(n.children[0])) or ev(n.children[1])
        else:
            v = ev(n.children[0]) == ev(n.children[1])
        memo[n.id] = v
        return v

    return ev(f)


def iter_nodes(f: Formula) -> Iterator[Formula]:
    """Each reachable node exactly once, children before parents."""
    seen: set[int] = set()
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        if node.id in seen:
            continue
        seen.add(node.id)
        stack.append((node, True))
        for c in node.children:
            stack.append((c, False))


def dag_size(f: Formula) -> int:
    """Number of distinct nodes reachable from ``f``."""
    return sum(1 for _ in iter_nodes(f))


def tree_size(f: Formula) -> int:
    """Node count of the fully expanded tree (shared nodes counted once per
    occurrence)."""
    sizes: dict[int, int] = {}
    for node in iter_nodes(f):
        sizes[node.id] = 1 + sum(sizes[c.id] for c in node.children)
    return sizes[f.id]


def atoms_of(f: Formula) -> list:
    """Atom payloads reachable from ``f``, in node-id order."""
    found = [n for n in iter_nodes(f) if n.kind == ATOM]
    found.sort(key=lambda n: n.id)
    return [n.payload for n in found]


def dump(f: Formula, atom_str: Callable[[Any], str] = repr) -> str:
    """Deterministic one-node-per-line rendering of the DAG."""
    nodes = sorted(iter_nodes(f), key=lambda n: n.id)
    lines = []
    for n in nodes:
        if n.kind == ATOM:
            body = f"(atom {atom_str(n.payload)})"
        elif n.kind in (TRUE, FALSE):
            body = n.kind
        else:
            body = "(" + " ".join([n.kind] + [f"n{c.id}" for c in n.children]) + ")"
        lines.append(f"n{n.id} = {body}")
    lines.append(f"root = n{f.id}")
    return "\n".join(lines)
