"""Abnormality theories: blocks, theories, well-formedness, and the structural
predicates the engine uses to pick a strategy.

A theory declares a distinguished set of abnormality letters and consists of
items, each a formula or a block ``{ C : B1, ..., Bm }``.  A block describes
the letters C; its children are formulas or nested blocks.  Extended blocks
additionally carry ``min``/``max`` letter lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from . import clauses
from .errors import SemanticError
from .formulas import (
    And,
    Atom,
    Circ,
    Const,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
)

Child = Union["Block", Formula]


@dataclass(frozen=True)
class Block:
    described: tuple[str, ...]
    children: tuple[Child, ...]
    min_letters: tuple[str, ...] = ()
    max_letters: tuple[str, ...] = ()

    def head_letters(self) -> tuple[str, ...]:
        return self.described + self.min_letters + self.max_letters

    def is_extended(self) -> bool:
        return bool(self.min_letters or self.max_letters)

    def formula_children(self) -> tuple[Formula, ...]:
        return tuple(c for c in self.children if isinstance(c, Formula))

    def block_children(self) -> tuple["Block", ...]:
        return tuple(c for c in self.children if isinstance(c, Block))


@dataclass(frozen=True)
class Nat:
    ab: tuple[str, ...]
    items: tuple[Child, ...]

    def blocks(self) -> tuple[Block, ...]:
        return tuple(i for i in self.items if isinstance(i, Block))

    def formulas(self) -> tuple[Formula, ...]:
        return tuple(i for i in self.items if isinstance(i, Formula))


# ---------------------------------------------------------------------------
# atom bookkeeping


def _ordered_formula_atoms(f: Formula, out: dict[str, None]) -> None:
    """Left-to-right first-occurrence collection (circ lists included)."""
    if isinstance(f, Atom):
        out.setdefault(f.name)
    elif isinstance(f, Const):
        pass
    elif isinstance(f, Not):
        _ordered_formula_atoms(f.arg, out)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            _ordered_formula_atoms(a, out)
    elif isinstance(f, (Implies, Iff)):
        _ordered_formula_atoms(f.left, out)
        _ordered_formula_atoms(f.right, out)
    elif isinstance(f, Circ):
        _ordered_formula_atoms(f.body, out)
        for n in f.minimized:
            out.setdefault(n)
        for n in f.floating:
            out.setdefault(n)
    elif isinstance(f, (Forall, Exists)):
        for n in f.bound:
            out.setdefault(n)
        _ordered_formula_atoms(f.body, out)
    else:
        raise TypeError(f"not a formula: {f!r}")


def _ordered_child_atoms(c: Child, out: dict[str, None]) -> None:
    if isinstance(c, Block):
        for n in c.head_letters():
            out.setdefault(n)
        for child in c.children:
            _ordered_child_atoms(child, out)
    else:
        _ordered_formula_atoms(c, out)


def formula_alphabet(f: Formula) -> tuple[str, ...]:
    """Atoms of a formula in first-occurrence order."""
    out: dict[str, None] = {}
    _ordered_formula_atoms(f, out)
    return tuple(out)


def nat_alphabet(t: Nat) -> tuple[str, ...]:
    """Declared abnormality letters first, then the rest in first-occurrence
    order.  This is the alphabet all model enumeration is keyed to."""
    out: dict[str, None] = {}
    for n in t.ab:
        out.setdefault(n)
    for item in t.items:
        _ordered_child_atoms(item, out)
    return tuple(out)


def nat_atoms(t: Nat) -> frozenset[str]:
    return frozenset(nat_alphabet(t))


def free_letters(t: Nat) -> tuple[str, ...]:
    """The alphabet minus Ab — the letters theory models are reported over."""
    ab = set(t.ab)
    return tuple(a for a in nat_alphabet(t) if a not in ab)


# ---------------------------------------------------------------------------
# structural measures


def block_depth(b: Block) -> int:
    nested = b.block_children()
    if not nested:
        return 0
    return 1 + max(block_depth(c) for c in nested)


def nat_depth(t: Nat) -> int:
    """Nesting depth: 0 for a theory of formulas and flat blocks; each level
    of block-in-block nesting adds one."""
    return max((block_depth(b) for b in t.blocks()), default=0)


def block_count(t: Nat) -> int:
    def count(c: Child) -> int:
        if isinstance(c, Block):
            return 1 + sum(count(x) for x in c.children)
        return 0

    return sum(count(i) for i in t.items)


def iter_blocks(t: Nat) -> Iterator[tuple[str, Block]]:
    """All blocks with their dotted index paths.

    The path indexes blocks among the *block* children of their parent, in
    order: the second top-level block is "1", its first nested block "1.0".
    Used wherever a deterministic per-block identity is needed (fresh-letter
    naming, benchmarking reports).
    """

    def walk(b: Block, path: str) -> Iterator[tuple[str, Block]]:
        yield path, b
        for j, c in enumerate(b.block_children()):
            yield from walk(c, f"{path}.{j}")

    for i, b in enumerate(t.blocks()):
        yield from walk(b, str(i))


def occurring_letters(b: Block) -> frozenset[str]:
    """Letters occurring in the subtree of ``b``: atoms of all formula
    descendants plus the head letters of nested blocks (not b's own)."""
    out: set[str] = set()
    for c in b.children:
        if isinstance(c, Block):
            out |= occurring_letters(c)
            out.update(c.head_letters())
        else:
            out.update(formula_alphabet(c))
    return frozenset(out)


def fixed_letters(b: Block, ab: tuple[str, ...]) -> frozenset[str]:
    """Letters ``b``'s circumscription keeps fixed yet constrains: occurring
    in its subtree but neither described nor abnormality letters."""
    return occurring_letters(b) - set(b.head_letters()) - set(ab)


def has_fixed_letters(t: Nat) -> bool:
    return any(fixed_letters(b, t.ab) for _, b in iter_blocks(t))


def unstable_fixed_letters(t: Nat) -> frozenset[str]:
    """Letters fixed in some block but described by an enclosing block.

    Such a letter is not really fixed: the enclosing circumscription varies
    it across competitors, so its value at the inner block is not determined
    by the model being checked.  Freezing it to the model's value is unsound,
    which is why the polynomial check refuses these theories.
    """
    bad: set[str] = set()

    def walk(b: Block, above: frozenset[str]) -> None:
        bad.update(fixed_letters(b, t.ab) & above)
        here = above | frozenset(b.head_letters())
        for c in b.block_children():
            walk(c, here)

    for top in t.blocks():
        walk(top, frozenset())
    return frozenset(bad)


def is_horn(t: Nat) -> bool:
    """Every formula child anywhere is a Horn CNF (clause-shaped reading,
    implications allowed)."""

    def check(c: Child) -> bool:
        if isinstance(c, Block):
            return all(check(x) for x in c.children)
        return clauses.is_horn_cnf(c)

    return all(check(i) for i in t.items)


def uses_minmax(t: Nat) -> bool:
    return any(b.is_extended() for _, b in iter_blocks(t))


# ---------------------------------------------------------------------------
# validation


@dataclass
class Report:
    errors: list[str] = field(default_factory=list)
    alphabet: tuple[str, ...] = ()
    ab: tuple[str, ...] = ()
    nd: int = 0
    n_blocks: int = 0
    is_horn: bool = False
    has_fixed_letters: bool = False
    uses_minmax: bool = False

    def ok(self) -> bool:
        return not self.errors


def validate(t: Nat) -> Report:
    r = Report(
        alphabet=nat_alphabet(t),
        ab=t.ab,
        nd=nat_depth(t),
        n_blocks=block_count(t),
        is_horn=is_horn(t),
        has_fixed_letters=has_fixed_letters(t),
        uses_minmax=uses_minmax(t),
    )
    if len(set(t.ab)) != len(t.ab):
        r.errors.append("duplicate abnormality letter in declaration")
    ab = set(t.ab)
    for path, b in iter_blocks(t):
        head = b.head_letters()
        if len(set(head)) != len(head):
            r.errors.append(f"block {path}: letter repeated across head lists")
        clash = set(head) & ab
        if clash:
            r.errors.append(
                f"block {path}: abnormality letters cannot be described: "
                + ", ".join(sorted(clash))
            )
    for item in t.items:
        _check_formulas(item, "theory", r)
    return r


def _check_formulas(c: Child, where: str, r: Report) -> None:
    if isinstance(c, Block):
        for x in c.children:
            _check_formulas(x, f"block {{{' '.join(c.described) or '~'} : ...}}", r)
        return
    for g in _subnodes(c):
        if isinstance(g, Circ):
            r.errors.append(f"{where}: circumscriptive atom inside a theory formula")
            return
        if isinstance(g, (Forall, Exists)):
            r.errors.append(f"{where}: quantifier inside a theory formula")
            return


def _subnodes(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from _subnodes(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _subnodes(a)
    elif isinstance(f, (Implies, Iff)):
        yield from _subnodes(f.left)
        yield from _subnodes(f.right)
    elif isinstance(f, (Circ, Forall, Exists)):
        yield from _subnodes(f.body)


def require_valid(t: Nat) -> Report:
    r = validate(t)
    if not r.ok():
        raise SemanticError("; ".join(r.errors))
    return r


def validate_circ_formula(f: Formula) -> None:
    """Side conditions for the circumscribed-formula language: minimized and
    floating lists disjoint and duplicate-free, no quantifiers."""
    for g in _subnodes(f):
        if isinstance(g, (Forall, Exists)):
            raise SemanticError("quantifiers are not part of the input language")
        if isinstance(g, Circ):
            if len(set(g.minimized)) != len(g.minimized):
                raise SemanticError("duplicate letter in minimized list")
            if len(set(g.floating)) != len(g.floating):
                raise SemanticError("duplicate letter in floating list")
            overlap = set(g.minimized) & set(g.floating)
            if overlap:
                raise SemanticError(
                    "letters both minimized and floating: " + ", ".join(sorted(overlap))
                )
