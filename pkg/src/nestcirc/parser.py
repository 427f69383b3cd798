"""Text syntax.

Formulas::

    f := f '<->' f        (left associative, loosest)
       | f '->' f         (right associative)
       | f '|' f
       | f '&' f
       | '~' f
       | 'true' | 'false' | atom | '(' f ')'
       | 'circ' '(' f ';' letters ';' letters ')'

Theories::

    ab <letters> ;                        # abnormality declaration, required
    { <letters> [; min <letters>] [; max <letters>] : child, ..., child }
    <formula> ;                           # top-level formula item

``{~: ...}`` marks an empty described list.  Letters are separated by spaces
or commas.  ``#`` starts a comment until end of line.  Atom names start with
a letter or underscore and may continue with letters, digits, ``_``, ``'``,
``@`` and ``.`` — the generated fresh letters round-trip through the parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .formulas import (
    FALSE,
    TRUE,
    Atom,
    Circ,
    Formula,
    Iff,
    Implies,
    conj,
    disj,
    lnot,
)
from .theory import Block, Nat

_TOKEN_RE = re.compile(
    r"(?P<skip>\s+|#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_'@.]*)"
    r"|(?P<op><->|->|[&|~(){};:,])"
)

RESERVED = {"true", "false", "circ"}


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", the operator text, or "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        if m.lastgroup == "skip":
            nl = m.group().count("\n")
            if nl:
                line += nl
                line_start = m.start() + m.group().rindex("\n") + 1
        else:
            kind = "ident" if m.lastgroup == "ident" else m.group()
            toks.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(Token("eof", "", line, len(text) - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            self.fail(f"expected {kind!r}, found {t.text or 'end of input'!r}")
        return self.advance()

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    # -- formulas ----------------------------------------------------------

    def formula(self) -> Formula:
        f = self.impl()
        while self.peek().kind == "<->":
            self.advance()
            f = Iff(f, self.impl())
        return f

    def impl(self) -> Formula:
        f = self.or_()
        if self.peek().kind == "->":
            self.advance()
            return Implies(f, self.impl())
        return f

    def or_(self) -> Formula:
        parts = [self.and_()]
        while self.peek().kind == "|":
            self.advance()
            parts.append(self.and_())
        return disj(parts) if len(parts) > 1 else parts[0]

    def and_(self) -> Formula:
        parts = [self.unary()]
        while self.peek().kind == "&":
            self.advance()
            parts.append(self.unary())
        return conj(parts) if len(parts) > 1 else parts[0]

    def unary(self) -> Formula:
        if self.peek().kind == "~":
            self.advance()
            return lnot(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        t = self.peek()
        if t.kind == "(":
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident":
            if t.text == "true":
                self.advance()
                return TRUE
            if t.text == "false":
                self.advance()
                return FALSE
            if t.text == "circ":
                return self.circ_atom()
            self.advance()
            return Atom(t.text)
        self.fail(f"expected a formula, found {t.text or 'end of input'!r}")

    def circ_atom(self) -> Formula:
        self.advance()  # 'circ'
        self.expect("(")
        body = self.formula()
        self.expect(";")
        minimized = self.letters()
        self.expect(";")
        floating = self.letters()
        self.expect(")")
        return Circ(body, minimized, floating)

    def letters(self) -> tuple[str, ...]:
        names: list[str] = []
        while True:
            t = self.peek()
            if t.kind == "," and names:
                self.advance()
                continue
            if t.kind != "ident" or t.text in RESERVED:
                break
            names.append(self.advance().text)
        return tuple(names)

    # -- theories ----------------------------------------------------------

    def nat(self) -> Nat:
        t = self.peek()
        if t.kind != "ident" or t.text != "ab":
            self.fail("a theory starts with its 'ab <letters>;' declaration")
        self.advance()
        ab = self.letters()
        self.expect(";")
        items: list[Block | Formula] = []
        while self.peek().kind != "eof":
            items.append(self.item())
        if not items:
            self.fail("a theory needs at least one item")
        return Nat(ab, tuple(items))

    def item(self) -> Block | Formula:
        if self.peek().kind == "{":
            b = self.block()
            if self.peek().kind == ";":
                self.advance()
            return b
        f = self.formula()
        self.expect(";")
        return f

    def block(self) -> Block:
        self.expect("{")
        described: tuple[str, ...] = ()
        if self.peek().kind == "~":
            self.advance()
        else:
            described = self.letters()
        min_letters: tuple[str, ...] = ()
        max_letters: tuple[str, ...] = ()
        seen_min = seen_max = False
        while self.peek().kind == ";":
            self.advance()
            t = self.peek()
            if t.kind == "ident" and t.text == "min" and not (seen_min or seen_max):
                self.advance()
                min_letters = self.letters()
                seen_min = True
            elif t.kind == "ident" and t.text == "max" and not seen_max:
                self.advance()
                max_letters = self.letters()
                seen_max = True
            else:
                self.fail("expected 'min <letters>' or 'max <letters>'")
        self.expect(":")
        children: list[Block | Formula] = [self.child()]
        while self.peek().kind == ",":
            self.advance()
            children.append(self.child())
        self.expect("}")
        return Block(described, tuple(children), min_letters, max_letters)

    def child(self) -> Block | Formula:
        if self.peek().kind == "{":
            return self.block()
        return self.formula()


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.expect("eof")
    return f


def parse_nat(text: str) -> Nat:
    p = _Parser(text)
    t = p.nat()
    return t


_PRENEX_KEYWORDS = {"forall", "exists", "matrix"}


def parse_prenex(
    text: str,
) -> tuple[tuple[tuple[str, tuple[str, ...]], ...], Formula]:
    """Prenex input: semicolon-separated quantifier blocks, outermost first,
    then the matrix::

        forall x1 x2; exists y1; matrix (x1 | x2) -> y1

    Returns ``(blocks, matrix)`` with blocks as ('a'|'e', names) pairs in the
    written (outermost-first) order.  Well-formedness beyond syntax — e.g.
    alternation — is the caller's concern.
    """
    p = _Parser(text)
    blocks: list[tuple[str, tuple[str, ...]]] = []
    while True:
        t = p.peek()
        if t.kind != "ident" or t.text not in _PRENEX_KEYWORDS:
            p.fail("expected 'forall', 'exists' or 'matrix'")
        if t.text == "matrix":
            p.advance()
            f = p.formula()
            p.expect("eof")
            return tuple(blocks), f
        kind = "a" if t.text == "forall" else "e"
        p.advance()
        names: list[str] = []
        while True:
            u = p.peek()
            if u.kind == "," and names:
                p.advance()
                continue
            if u.kind != "ident" or u.text in RESERVED or u.text in _PRENEX_KEYWORDS:
                break
            names.append(p.advance().text)
        if not names:
            p.fail("empty quantifier block")
        p.expect(";")
        blocks.append((kind, tuple(names)))


def parse_model(text: str) -> frozenset[str]:
    """Model literals: atom names separated by commas and/or spaces; an empty
    string (or lone '~') is the empty model."""
    text = text.strip()
    if not text or text == "~":
        return frozenset()
    names = [n for n in re.split(r"[,\s]+", text) if n]
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_'@.]*", n):
            raise ParseError(f"not an atom name: {n!r}")
    return frozenset(names)
