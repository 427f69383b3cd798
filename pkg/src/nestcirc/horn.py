"""Polynomial procedures for Horn theories.

A Horn theory (every formula child a Horn CNF, clause-shaped reading) without
fixed letters collapses to a single Horn CNF over the non-abnormality
letters: compute each block's least model bottom-up, use its abnormality
values to reduce that block's own clauses, and conjoin.  Model checking with
fixed letters works the same way after freezing the fixed letters to their
values in the model being checked.  Blocks with min/max letter lists of
nesting depth 0 get a dedicated check that never builds the (non-Horn)
lowered form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .clauses import Clause, clause_formula, cnf_of
from .errors import SemanticError
from .formulas import Formula, atoms as formula_atoms, conj, evaluate
from .theory import (
    Block,
    Nat,
    fixed_letters,
    free_letters,
    has_fixed_letters,
    is_horn,
    nat_alphabet,
    require_valid,
    unstable_fixed_letters,
    uses_minmax,
)

FALSUM = Clause((), ())


# ---------------------------------------------------------------------------
# least models


def least_model(cls: list[Clause] | tuple[Clause, ...]) -> frozenset[str] | None:
    """Least model of a Horn clause set by counter-based unit propagation,
    linear in the total literal count.  None means unsatisfiable."""
    counts = []
    watch: dict[str, list[int]] = {}
    derived: set[str] = set()
    queue: list[str] = []

    def fire(i: int) -> bool:
        c = cls[i]
        if not c.pos:
            return False  # all body atoms derived, no head: contradiction
        head = c.pos[0]
        if head not in derived:
            derived.add(head)
            queue.append(head)
        return True

    for i, c in enumerate(cls):
        if len(c.pos) > 1:
            raise SemanticError("clause with two positive literals is not Horn")
        counts.append(len(c.neg))
        for a in c.neg:
            watch.setdefault(a, []).append(i)
        if counts[i] == 0 and not fire(i):
            return None
    while queue:
        a = queue.pop()
        for i in watch.get(a, ()):
            counts[i] -= 1
            if counts[i] == 0 and not fire(i):
                return None
    return frozenset(derived)


def clauses_satisfied(cls, model: frozenset[str]) -> bool:
    return all(
        any(p in model for p in c.pos) or any(n not in model for n in c.neg)
        for c in cls
    )


def _reduce_clause(c: Clause, ab_true: frozenset[str], abset: frozenset[str]) -> Clause | None:
    """Substitute abnormality values into one clause: None when satisfied,
    otherwise the clause with its abnormality literals removed."""
    if any(p in ab_true for p in c.pos):
        return None
    if any(n in abset and n not in ab_true for n in c.neg):
        return None
    return Clause(
        tuple(p for p in c.pos if p not in abset),
        tuple(n for n in c.neg if n not in abset),
    )


def _child_cnf(f: Formula) -> list[Clause]:
    out = cnf_of(f)
    if out is None:
        raise SemanticError("formula child is not clause-shaped")
    return out


# ---------------------------------------------------------------------------
# flattening (no fixed letters)


@dataclass(frozen=True)
class FlatResult:
    clauses: tuple[Clause, ...]  # over the non-abnormality letters
    model: frozenset[str] | None  # least model; None iff unsatisfiable
    letters: tuple[str, ...]  # the non-abnormality alphabet

    def formula(self) -> Formula:
        return conj([clause_formula(c) for c in self.clauses])


def flatten(t: Nat) -> FlatResult:
    """Flat normal form of a Horn theory without fixed letters: an equivalent
    abnormality-free Horn CNF plus its least model.

    Every clause is reduced exactly once, by the least model of the block it
    belongs to; an unsatisfiable block contributes falsum, which propagates.
    """
    require_valid(t)
    if not is_horn(t):
        raise SemanticError("flattening needs a Horn theory")
    if uses_minmax(t):
        raise SemanticError("lower min/max blocks before flattening")
    if has_fixed_letters(t):
        raise SemanticError("flattening needs a theory without fixed letters")
    abset = frozenset(t.ab)
    for f in t.formulas():
        if formula_atoms(f) & abset:
            # Top-level formulas read their abnormality letters
            # existentially; grouping would minimize them instead.
            raise SemanticError(
                "top-level formulas with abnormality letters cannot be flattened"
            )
    free = free_letters(t)
    # Group everything under one block describing all non-Ab letters; the
    # model set is unchanged and the recursion needs only one entry point.
    top = Block(free, t.items)
    flat = _flatten_block(top, abset)
    return FlatResult(tuple(flat), least_model(flat), free)


def _flatten_block(b: Block, abset: frozenset[str]) -> list[Clause]:
    own: list[Clause] = []
    for f in b.formula_children():
        own.extend(_child_cnf(f))
    nested: list[Clause] = []
    for c in b.block_children():
        nested.extend(_flatten_block(c, abset))
    m0 = least_model(own + nested)
    if m0 is None:
        return [FALSUM]
    ab_true = m0 & abset
    out: list[Clause] = []
    for c in own:
        r = _reduce_clause(c, ab_true, abset)
        if r is not None:
            out.append(r)
    out.extend(nested)
    return out


# ---------------------------------------------------------------------------
# freezing fixed letters


def freeze_fixed(t: Nat, model: frozenset[str]) -> Nat:
    """Rewrite each block to describe every letter, adding the fixed letters'
    values in ``model`` as unit children.  The result has no fixed letters
    and is satisfied by ``model`` iff the original is.

    Requires stable fixed letters: a letter fixed in a block must not be
    described by an enclosing block.  Otherwise outer competitors vary the
    letter while the freeze pins it, and the equivalence breaks.
    """
    unstable = unstable_fixed_letters(t)
    if unstable:
        raise SemanticError(
            "fixed letters described by an enclosing block cannot be "
            "frozen: " + " ".join(sorted(unstable))
        )
    alphabet = nat_alphabet(t)
    abset = frozenset(t.ab)

    def unit(q: str) -> Formula:
        from .formulas import Atom, Not

        return Atom(q) if q in model else Not(Atom(q))

    def rewrite(b: Block) -> Block:
        if b.is_extended():
            raise SemanticError("lower min/max blocks before freezing")
        extra = tuple(
            a for a in alphabet if a not in abset and a not in b.described
        )
        # Pin only letters the block actually constrains.  A letter that is
        # merely absent from the described set does not need a value, and
        # pinning it would wrongly veto competitors of an enclosing block
        # that varies it.
        units = tuple(unit(q) for q in sorted(fixed_letters(b, t.ab)))
        children = tuple(
            rewrite(c) if isinstance(c, Block) else c for c in b.children
        )
        return Block(b.described + extra, units + children)

    items = tuple(rewrite(i) if isinstance(i, Block) else i for i in t.items)
    return Nat(t.ab, items)


# ---------------------------------------------------------------------------
# model checking with fixed letters


def horn_check_model(t: Nat, model: frozenset[str]) -> bool:
    """Polynomial model check for Horn theories (fixed letters allowed, no
    min/max): freeze the fixed letters to their values in ``model``, flatten
    bottom-up, and check the resulting abnormality-free clauses.

    Only the fixed letters actually occurring in a block's subtree are
    frozen, so the work stays proportional to the theory size.  Fixed
    letters must be stable (not described by an enclosing block); theories
    violating that are rejected rather than answered wrongly.
    """
    require_valid(t)
    if not is_horn(t):
        raise SemanticError("the polynomial check needs a Horn theory")
    if uses_minmax(t):
        raise SemanticError("lower min/max blocks first")
    unstable = unstable_fixed_letters(t)
    if unstable:
        raise SemanticError(
            "fixed letters described by an enclosing block defeat the "
            "freeze: " + " ".join(sorted(unstable))
        )
    abset = frozenset(t.ab)
    if model & abset:
        raise SemanticError("models are given over the non-abnormality letters")
    for f in t.formulas():
        if formula_atoms(f) & abset:
            raise SemanticError(
                "top-level formulas with abnormality letters have no Horn check"
            )

    def reduced(b: Block) -> list[Clause]:
        units = [
            Clause((q,), ()) if q in model else Clause((), (q,))
            for q in sorted(fixed_letters(b, t.ab))
        ]
        own: list[Clause] = []
        for f in b.formula_children():
            own.extend(_child_cnf(f))
        nested: list[Clause] = []
        for c in b.block_children():
            nested.extend(reduced(c))
        m0 = least_model(own + units + nested)
        if m0 is None:
            return [FALSUM]
        ab_true = m0 & abset
        out = [
            r
            for c in own
            if (r := _reduce_clause(c, ab_true, abset)) is not None
        ]
        return out + units + nested

    for item in t.items:
        if isinstance(item, Block):
            if not clauses_satisfied(reduced(item), model):
                return False
        elif not evaluate(item, model):
            return False
    return True


# ---------------------------------------------------------------------------
# inference


def horn_infer_cnf(t: Nat, conclusion: Formula) -> bool:
    """Does a Horn theory without fixed letters entail a CNF-shaped
    propositional conclusion?  Flatten once, then refute clause by clause:
    assume a clause's negation as units and propagate."""
    flat = flatten(t)
    if flat.model is None:
        return True
    goal = cnf_of(conclusion)
    if goal is None:
        raise SemanticError("conclusion is not clause-shaped")
    base = list(flat.clauses)
    for g in goal:
        assumed = base + [Clause((q,), ()) for q in g.neg]
        m = least_model(assumed)
        if m is None:
            continue
        if any(p in m for p in g.pos):
            continue
        return False
    return True


# ---------------------------------------------------------------------------
# depth-0 blocks with min/max letters


def _extended0_parts(b: Block, ab: tuple[str, ...], alphabet: tuple[str, ...]):
    """Shared setup: clause view of the block plus the auxiliary letters its
    lowering would use (same names, so completions are comparable)."""
    if b.block_children():
        raise SemanticError("the direct min/max check needs nesting depth 0")
    from .transforms import lower_block

    lowered = lower_block(b, set(alphabet))
    own: list[Clause] = []
    for f in b.formula_children():
        own.extend(_child_cnf(f))
    for c in own:
        if len(c.pos) > 1:
            raise SemanticError("block is not Horn")
    minus = [Clause((abp,), (p,)) for p, abp in lowered.minus]  # p -> ab_p
    plus = dict(lowered.plus)
    return lowered, own, minus, plus


def extended0_check(
    b: Block, model: frozenset[str], ab: tuple[str, ...], alphabet: tuple[str, ...]
) -> bool:
    """Model checking for a depth-0 Horn block with min/max letters, in
    polynomial time.

    Compute the candidate witness by propagation (``model``'s values as
    units; max-letters contribute their auxiliary letter set to the value
    making the lowering's completion clauses true), then confirm minimality:
    no single abnormality letter of the witness can be lowered, which is
    checked by one Horn satisfiability call per candidate flip.
    """
    lowered, own, minus, plus = _extended0_parts(b, ab, alphabet)
    abset = set(ab)
    non_ab = [a for a in alphabet if a not in abset]
    units = [
        Clause((q,), ()) if q in model else Clause((), (q,)) for q in non_ab
    ]
    aux_units = [
        Clause((), (plus[p],)) if p in model else Clause((plus[p],), ())
        for p in b.max_letters
    ]
    m1 = least_model(own + minus + units + aux_units)
    if m1 is None:
        return False
    head = set(b.head_letters())
    q_letters = [a for a in non_ab if a not in head]
    f_pos = [Clause((q,), ()) for q in q_letters if q in model]
    f_pos += [Clause((p,), ()) for p in b.max_letters if p in model]
    regular = [a for a in ab if a in set(alphabet)] + [abp for _, abp in lowered.minus]
    f_neg = [Clause((), (q,)) for q in q_letters if q not in model]
    f_neg += [Clause((), (a,)) for a in regular if a not in m1]
    base = own + minus + f_pos + f_neg
    flips: list[Clause] = [
        Clause((p,), ()) for p in b.max_letters if p not in model
    ]
    flips += [Clause((), (a,)) for a in regular if a in m1]
    for flip in flips:
        if least_model(base + [flip]) is not None:
            return False
    return True


def extended0_completion(
    b: Block, model: frozenset[str], ab: tuple[str, ...], alphabet: tuple[str, ...]
) -> frozenset[str] | None:
    """The candidate witness extension computed by the direct check; when the
    model satisfies the block, this is a witness of its lowered form (using
    the lowering's own auxiliary letter names)."""
    lowered, own, minus, plus = _extended0_parts(b, ab, alphabet)
    abset = set(ab)
    non_ab = [a for a in alphabet if a not in abset]
    units = [
        Clause((q,), ()) if q in model else Clause((), (q,)) for q in non_ab
    ]
    aux_units = [
        Clause((), (plus[p],)) if p in model else Clause((plus[p],), ())
        for p in b.max_letters
    ]
    m1 = least_model(own + minus + units + aux_units)
    if m1 is None:
        return None
    # propagation derives only positives; the max-letter auxiliaries that are
    # true were asserted as units, so m1 is already the full witness
    return m1
