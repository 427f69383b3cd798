"""Renderers for formulas, theories and models.

Inverse of the parser: ``parse_formula(render_formula(f)) == f`` for every
formula built through the smart constructors, and likewise for theories.
"""

from __future__ import annotations

from .formulas import (
    And,
    Atom,
    Circ,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
)
from .theory import Block, Nat

# precedence: <-> 1, -> 2, | 3, & 4, ~ 5, atoms 6


def _prec(f: Formula) -> int:
    if isinstance(f, Iff):
        return 1
    if isinstance(f, Implies):
        return 2
    if isinstance(f, Or):
        return 3
    if isinstance(f, And):
        return 4
    if isinstance(f, Not):
        return 5
    return 6


def _render(f: Formula, level: int) -> str:
    if isinstance(f, Atom):
        s = f.name
    elif isinstance(f, Const):
        s = "true" if f.value else "false"
    elif isinstance(f, Not):
        s = "~" + _render(f.arg, 5)
    elif isinstance(f, And):
        s = " & ".join(_render(a, 5) for a in f.args)
    elif isinstance(f, Or):
        s = " | ".join(_render(a, 4) for a in f.args)
    elif isinstance(f, Implies):
        s = _render(f.left, 3) + " -> " + _render(f.right, 2)
    elif isinstance(f, Iff):
        s = _render(f.left, 1) + " <-> " + _render(f.right, 2)
    elif isinstance(f, Circ):
        s = (
            "circ("
            + _render(f.body, 1)
            + "; "
            + " ".join(f.minimized)
            + "; "
            + " ".join(f.floating)
            + ")"
        )
    else:
        raise TypeError(f"no surface syntax for {type(f).__name__}")
    if _prec(f) < level:
        return "(" + s + ")"
    return s


def render_formula(f: Formula) -> str:
    return _render(f, 1)


def _head(b: Block) -> str:
    parts = [" ".join(b.described) if b.described else "~"]
    if b.min_letters:
        parts.append("min " + " ".join(b.min_letters))
    if b.max_letters:
        parts.append("max " + " ".join(b.max_letters))
    return "; ".join(parts)


def render_block(b: Block, indent: int = 0) -> str:
    pad = " " * indent
    inner = " " * (indent + 2)
    lines = [pad + "{ " + _head(b) + " :"]
    rendered = []
    for c in b.children:
        if isinstance(c, Block):
            rendered.append(render_block(c, indent + 2))
        else:
            rendered.append(inner + render_formula(c))
    lines.append(",\n".join(rendered))
    lines.append(pad + "}")
    return "\n".join(lines)


def render_nat(t: Nat) -> str:
    lines = ["ab " + " ".join(t.ab) + ";" if t.ab else "ab;"]
    for item in t.items:
        if isinstance(item, Block):
            lines.append(render_block(item))
        else:
            lines.append(render_formula(item) + ";")
    return "\n".join(lines) + "\n"


def render_model(model: frozenset[str], alphabet: tuple[str, ...] | None = None) -> str:
    if alphabet is not None:
        names = [a for a in alphabet if a in model]
        extra = sorted(model - set(alphabet))
        names += extra
    else:
        names = sorted(model)
    return ",".join(names) if names else "~"
