"""Structural rewritings: lowering min/max letter lists, eliminating fixed
letters, grouping top-level blocks, and compiling priority levels."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SemanticError
from .formulas import (
    And,
    Atom,
    Circ,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    conj,
    is_propositional,
)
from .qbf import FreshNames
from .theory import (
    Block,
    Nat,
    fixed_letters,
    formula_alphabet,
    nat_alphabet,
    require_valid,
    validate_circ_formula,
)


# ---------------------------------------------------------------------------
# min/max letter lists


@dataclass(frozen=True)
class LoweredBlock:
    """An ordinary block equivalent to one with min/max letter lists, plus
    the bookkeeping of the auxiliary abnormality letters it introduced."""

    block: Block
    minus: tuple[tuple[str, str], ...]  # (p, ab_p) for each min letter
    plus: tuple[tuple[str, str], ...]  # (p, ab_p) for each max letter
    new_ab: tuple[str, ...]


def lower_block(b: Block, used: set[str], path: str = "") -> LoweredBlock:
    """Lower one block's min/max lists (children are left alone): minimized
    letters get a conjunct p -> ab_p, maximized ones ~ab_p -> p, and all the
    listed letters become described.  ``used`` is updated in place, so
    repeated calls with a shared set stay collision-free."""
    if not b.is_extended():
        return LoweredBlock(b, (), (), ())

    def alloc(p: str) -> str:
        name = f"ab_{p}"
        if name in used and path:
            name = f"ab_{p}@{path}"
        while name in used:
            name += "'"
        used.add(name)
        return name

    minus = tuple((p, alloc(p)) for p in b.min_letters)
    plus = tuple((p, alloc(p)) for p in b.max_letters)
    low: list[Formula] = [Implies(Atom(p), Atom(a)) for p, a in minus]
    low += [Implies(Not(Atom(a)), Atom(p)) for p, a in plus]
    block = Block(
        b.described + b.min_letters + b.max_letters,
        tuple(low) + b.children,
    )
    return LoweredBlock(block, minus, plus, tuple(a for _, a in minus + plus))


def lower_extended(t: Nat) -> tuple[Nat, tuple[str, ...]]:
    """Replace every block with min/max letter lists by its lowered form.
    Returns the rewritten theory and the introduced abnormality letters."""
    require_valid(t)
    used = set(nat_alphabet(t))
    new_ab: list[str] = []

    def walk(b: Block, path: str) -> Block:
        lb = lower_block(b, used, path)
        new_ab.extend(lb.new_ab)
        kids: list[Block | Formula] = []
        index = 0
        for c in lb.block.children:
            if isinstance(c, Block):
                sub = f"{path}.{index}" if path else str(index)
                kids.append(walk(c, sub))
                index += 1
            else:
                kids.append(c)
        return Block(lb.block.described, tuple(kids))

    items: list[Block | Formula] = []
    index = 0
    for item in t.items:
        if isinstance(item, Block):
            items.append(walk(item, str(index)))
            index += 1
        else:
            items.append(item)
    return Nat(t.ab + tuple(new_ab), tuple(items)), tuple(new_ab)


# ---------------------------------------------------------------------------
# fixed letters, circumscribed formulas


def eliminate_fixed_circ(f: Formula) -> tuple[Formula, tuple[str, ...]]:
    """Rewrite every circumscription so that it has no fixed letters: each
    fixed q is paired with a fresh q' constrained by q <-> ~q', and both are
    minimized.  Flipping q then forces flipping q', so neither direction
    improves and q behaves exactly as if held fixed.

    An auxiliary q' is minimized only in the circumscription it was made
    for; every enclosing circumscription floats it.  Both other roles are
    wrong there: left fixed, q' partitions the enclosing comparison (models
    differing on q are never compared), and minimized it orders by ~q,
    anti-minimizing q.

    Sound only where the circumscriptions sit positively, hence the polarity
    restriction; the models of the result, projected to the original
    letters, are the models of the input.
    """
    validate_circ_formula(f)
    fresh = FreshNames(set(formula_alphabet(f)))
    introduced: list[str] = []

    def walk(g: Formula, sign: int) -> Formula:
        if isinstance(g, Not):
            return Not(walk(g.arg, -sign))
        if isinstance(g, And):
            return And(tuple(walk(a, sign) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(walk(a, sign) for a in g.args))
        if isinstance(g, Implies):
            return Implies(walk(g.left, -sign), walk(g.right, sign))
        if isinstance(g, Iff):
            return Iff(walk(g.left, 0), walk(g.right, 0))
        if isinstance(g, Circ):
            if sign != 1:
                raise SemanticError(
                    "fixed-letter elimination needs circumscriptions in "
                    "positive positions"
                )
            listed = set(g.minimized) | set(g.floating)
            fixed = [a for a in formula_alphabet(g.body) if a not in listed]
            mark = len(introduced)
            body = walk(g.body, 1)
            floating = tuple(g.floating) + tuple(introduced[mark:])
            if not fixed:
                return Circ(body, g.minimized, floating)
            parts: list[Formula] = [body]
            minimized = list(g.minimized)
            for q in fixed:
                q2 = fresh.prime(q)
                introduced.append(q2)
                minimized += [q, q2]
                parts.append(Iff(Atom(q), Not(Atom(q2))))
            return Circ(conj(parts), tuple(minimized), floating)
        return g

    return walk(f, 1), tuple(introduced)


# ---------------------------------------------------------------------------
# fixed letters, theories


def eliminate_fixed_nat(t: Nat) -> tuple[Nat, tuple[str, ...]]:
    """Rewrite each block so it describes its fixed letters, freezing them
    with a globally shared pair of fresh abnormality letters per letter:
    (q <-> ab_q) & (ab_q <-> ~ab'_q) is added as a formula child wherever q
    was fixed.  The models over the original non-abnormality letters are
    unchanged, including their canonical order: fixed letters join the
    described lists in alphabet order, so the enumeration alphabet keeps its
    shape."""
    require_valid(t)
    alphabet = nat_alphabet(t)
    fresh = FreshNames(set(alphabet))
    pairs: dict[str, tuple[str, str]] = {}

    def pair(q: str) -> tuple[str, str]:
        if q not in pairs:
            pairs[q] = (fresh.variant(f"ab_{q}"), fresh.variant(f"ab'_{q}"))
        return pairs[q]

    def rewrite(b: Block) -> Block:
        fixed = sorted(fixed_letters(b, t.ab), key=alphabet.index)
        children = tuple(
            rewrite(c) if isinstance(c, Block) else c for c in b.children
        )
        if not fixed:
            return Block(b.described, children, b.min_letters, b.max_letters)
        extra: list[Formula] = []
        for q in fixed:
            a1, a2 = pair(q)
            extra.append(
                And((Iff(Atom(q), Atom(a1)), Iff(Atom(a1), Not(Atom(a2)))))
            )
        return Block(
            b.described + tuple(fixed),
            tuple(extra) + children,
            b.min_letters,
            b.max_letters,
        )

    items = tuple(
        rewrite(i) if isinstance(i, Block) else i for i in t.items
    )
    new_ab = tuple(a for q in pairs for a in pairs[q])
    return Nat(t.ab + new_ab, items), new_ab


# ---------------------------------------------------------------------------
# grouping and priorities


def group_blocks(t: Nat, letters: tuple[str, ...]) -> Nat:
    """Wrap all top-level items into a single block describing ``letters``.
    Sound when every top-level block's satisfaction is independent of the
    letters it leaves undescribed, e.g. when ``letters`` covers all the
    non-abnormality letters."""
    seen: list[str] = []
    for a in letters:
        if a in t.ab:
            raise SemanticError(f"described letter {a!r} is an abnormality letter")
        if a not in seen:
            seen.append(a)
    return Nat(t.ab, (Block(tuple(seen), t.items),))


def compile_prioritized(
    body: Formula, levels: list[tuple[str, ...]], floating: tuple[str, ...] = ()
) -> Formula:
    """Priority levels as nested circumscription: minimize the first level
    with everything below it floating, then the second level around that,
    and so on outward."""
    if not is_propositional(body):
        raise SemanticError("priority compilation starts from a plain formula")
    if not levels or any(not lv for lv in levels):
        raise SemanticError("priority levels must be nonempty")
    seen: set[str] = set(floating)
    for lv in levels:
        for p in lv:
            if p in seen:
                raise SemanticError(f"letter {p!r} appears in two lists")
            seen.add(p)
    out = body
    for i, level in enumerate(levels):
        below = tuple(p for lv in levels[i + 1 :] for p in lv)
        out = Circ(out, tuple(level), tuple(floating) + below)
    return out
