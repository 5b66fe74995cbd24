"""Parser for the legacy ``.trs`` input format.

A file is a sequence of parenthesised blocks.  ``(VAR x y ...)`` declares
variable names, ``(RULES l -> r ...)`` lists the rules, ``(COMMENT ...)`` is
skipped.  Any other block (STRATEGY, THEORY, ...) is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import App, Rule, Symbol, Term, Trs, Var, variables


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnsupportedBlockError(ParseError):
    """A block the tool deliberately does not handle."""


_LPAREN, _RPAREN, _COMMA, _ARROW, _IDENT, _EOF = "(", ")", ",", "->", "ident", "eof"


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
        elif c in " \t\r":
            i, col = i + 1, col + 1
        elif c in "(),":
            toks.append(_Token(c, c, line, col))
            i, col = i + 1, col + 1
        elif text.startswith("->", i):
            toks.append(_Token(_ARROW, "->", line, col))
            i, col = i + 2, col + 2
        else:
            start, start_col = i, col
            while i < n and text[i] not in " \t\r\n()," and not text.startswith("->", i):
                i, col = i + 1, col + 1
            toks.append(_Token(_IDENT, text[start:i], line, start_col))
    toks.append(_Token(_EOF, "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.vars: set[str] = set()
        self.arities: dict[str, int] = {}
        self.rules: list[Rule] = []

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, found {tok.text!r}" if tok.kind != _EOF
                             else f"expected {what}, found end of input",
                             tok.line, tok.column)
        return tok

    def parse(self) -> Trs:
        while self.peek().kind != _EOF:
            self.expect(_LPAREN, "'('")
            name = self.expect(_IDENT, "a block name")
            if name.text == "VAR":
                self.var_block()
            elif name.text == "RULES":
                self.rules_block()
            elif name.text == "COMMENT":
                self.skip_block()
            else:
                raise UnsupportedBlockError(
                    f"unsupported block {name.text!r}", name.line, name.column)
        return Trs.of(self.rules)

    def var_block(self) -> None:
        while self.peek().kind == _IDENT:
            self.vars.add(self.next().text)
        self.expect(_RPAREN, "')'")

    def skip_block(self) -> None:
        depth = 1
        while depth:
            tok = self.next()
            if tok.kind == _EOF:
                raise ParseError("unterminated block", tok.line, tok.column)
            if tok.kind == _LPAREN:
                depth += 1
            elif tok.kind == _RPAREN:
                depth -= 1

    def rules_block(self) -> None:
        while self.peek().kind != _RPAREN:
            start = self.peek()
            lhs = self.term()
            self.expect(_ARROW, "'->'")
            rhs = self.term()
            if isinstance(lhs, Var):
                raise ParseError("left-hand side is a variable", start.line, start.column)
            bound = set(variables(lhs))
            free = [v.name for v in variables(rhs) if v not in bound]
            if free:
                raise ParseError(
                    f"right-hand side variables not bound on the left: {', '.join(free)}",
                    start.line, start.column)
            self.rules.append(Rule(lhs, rhs))
        self.next()

    def term(self) -> Term:
        tok = self.expect(_IDENT, "a term")
        if self.peek().kind == _LPAREN:
            if tok.text in self.vars:
                raise ParseError(f"variable {tok.text!r} used with arguments",
                                 tok.line, tok.column)
            self.next()
            args = [self.term()]
            while self.peek().kind == _COMMA:
                self.next()
                args.append(self.term())
            self.expect(_RPAREN, "')' or ','")
            return App(self.symbol(tok, len(args)), tuple(args))
        if tok.text in self.vars:
            return Var(tok.text)
        return App(self.symbol(tok, 0), ())

    def symbol(self, tok: _Token, arity: int) -> Symbol:
        prev = self.arities.setdefault(tok.text, arity)
        if prev != arity:
            raise ParseError(
                f"symbol {tok.text!r} used with {arity} arguments but earlier with {prev}",
                tok.line, tok.column)
        return Symbol(tok.text, arity)


def parse_trs(text: str) -> Trs:
    """Parse rewrite-system source text into a :class:`Trs`."""
    return _Parser(text).parse()
