"""Reference semantics by exhaustive enumeration.

Everything here implements the definitions directly — preference between
interpretations, minimal-model checking for circumscribed formulas, and the
witness-extension characterization for abnormality theories — with no
shortcuts.  It is exponential on purpose and capped; the fast paths elsewhere
are tested against it.

An interpretation is a frozenset of the atoms it makes true, total over a
given alphabet.  Minimality follows the second-order definition: N is strictly
preferred to M iff they agree on the fixed letters and N's minimized part is a
proper subset of M's.  Floating letters never make a preference strict on
their own (two models differing only there are equally preferred).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator

from .errors import CapExceeded, SemanticError
from .formulas import Atom, Circ, Const, Formula, Iff, Implies, Not, And, Or, evaluate
from .theory import (
    Block,
    Nat,
    formula_alphabet,
    nat_alphabet,
    require_valid,
    uses_minmax,
)

DEFAULT_CAP = 20


def _check_cap(alphabet: tuple[str, ...], cap: int) -> None:
    if len(alphabet) > cap:
        raise CapExceeded(
            f"{len(alphabet)} atoms exceed the enumeration cap of {cap}; "
            "raise --cap to force the exhaustive oracle"
        )


def assignments(atoms: tuple[str, ...]) -> Iterator[frozenset[str]]:
    """All interpretations over ``atoms`` in canonical order: the bit tuple
    (first atom most significant) counts upward, so the empty model is first."""
    for bits in product((False, True), repeat=len(atoms)):
        yield frozenset(a for a, b in zip(atoms, bits) if b)


def model_sort_key(alphabet: tuple[str, ...]):
    def key(m: frozenset[str]):
        return tuple(a in m for a in alphabet)

    return key


def subsets(atoms: Iterable[str]) -> Iterator[frozenset[str]]:
    pool = tuple(atoms)
    for r in range(len(pool) + 1):
        for combo in combinations(pool, r):
            yield frozenset(combo)


# ---------------------------------------------------------------------------
# preference


@dataclass(frozen=True)
class PrefContext:
    alphabet: tuple[str, ...]
    minimized: frozenset[str]
    floating: frozenset[str]

    def __post_init__(self):
        if self.minimized & self.floating:
            raise SemanticError("letters both minimized and floating")

    @property
    def fixed(self) -> frozenset[str]:
        return frozenset(self.alphabet) - self.minimized - self.floating


def prefer(m: frozenset[str], n: frozenset[str], ctx: PrefContext) -> str:
    """Compare two interpretations under the context's preference.

    Returns "less" when m is strictly preferred to n (equal fixed part,
    minimized part properly included), "greater" for the converse, "equal"
    when the two agree on everything but floating letters, else
    "incomparable".
    """
    alpha = set(ctx.alphabet)
    if (m - alpha) or (n - alpha):
        raise SemanticError("interpretation uses atoms outside the alphabet")
    if m & ctx.fixed != n & ctx.fixed:
        return "incomparable"
    mp, np = m & ctx.minimized, n & ctx.minimized
    if mp == np:
        return "equal"
    if mp < np:
        return "less"
    if np < mp:
        return "greater"
    return "incomparable"


# ---------------------------------------------------------------------------
# circumscribed formulas


def sat_circ(f: Formula, model: frozenset[str], alphabet: tuple[str, ...]) -> bool:
    """Truth of a (possibly nested) circumscribed formula in a total
    interpretation, straight from the minimal-model definition."""
    if isinstance(f, Atom):
        return f.name in model
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not sat_circ(f.arg, model, alphabet)
    if isinstance(f, And):
        return all(sat_circ(a, model, alphabet) for a in f.args)
    if isinstance(f, Or):
        return any(sat_circ(a, model, alphabet) for a in f.args)
    if isinstance(f, Implies):
        return (not sat_circ(f.left, model, alphabet)) or sat_circ(f.right, model, alphabet)
    if isinstance(f, Iff):
        return sat_circ(f.left, model, alphabet) == sat_circ(f.right, model, alphabet)
    if isinstance(f, Circ):
        if not sat_circ(f.body, model, alphabet):
            return False
        minimized = frozenset(f.minimized)
        floating = frozenset(f.floating)
        fixed_part = model - minimized - floating
        own = model & minimized
        # A competitor keeps the fixed letters, takes a proper subset of the
        # minimized part, and may set floating letters arbitrarily.
        # Smallest candidates first for early exit.
        for smaller in subsets(sorted(own)):
            if smaller == own:
                continue
            for zpart in subsets(sorted(floating)):
                n = fixed_part | smaller | zpart
                if sat_circ(f.body, n, alphabet):
                    return False
        return True
    raise TypeError(f"cannot evaluate {type(f).__name__} here")


def brute_models_lcirc(
    f: Formula,
    alphabet: tuple[str, ...] | None = None,
    cap: int = DEFAULT_CAP,
) -> list[frozenset[str]]:
    """Exact model set of a circumscribed formula, canonical order."""
    if alphabet is None:
        alphabet = formula_alphabet(f)
    _check_cap(alphabet, cap)
    return [m for m in assignments(alphabet) if sat_circ(f, m, alphabet)]


# ---------------------------------------------------------------------------
# abnormality theories


def _children_sat(
    b: Block, n: frozenset[str], ab: tuple[str, ...], alphabet: tuple[str, ...]
) -> bool:
    for c in b.children:
        if isinstance(c, Block):
            if not block_sat(c, n, ab, alphabet):
                return False
        elif not evaluate(c, n):
            return False
    return True


def _minimal_witness(
    b: Block,
    candidate: frozenset[str],
    ab: tuple[str, ...],
    alphabet: tuple[str, ...],
) -> bool:
    """Is ``candidate`` minimal on the abnormality letters among children
    models that agree with it outside Ab ∪ C?"""
    abset = frozenset(ab)
    floating = frozenset(b.described)
    fixed_part = candidate - abset - floating
    own_ab = candidate & abset
    for smaller in subsets(sorted(own_ab)):
        if smaller == own_ab:
            continue
        for zpart in subsets(sorted(floating)):
            n = fixed_part | smaller | zpart
            if _children_sat(b, n, ab, alphabet):
                return False
    return True


def block_sat(
    b: Block, model: frozenset[str], ab: tuple[str, ...], alphabet: tuple[str, ...]
) -> bool:
    """Witness characterization: the block is satisfied iff some abnormality
    completion of the model's non-Ab part is a minimal model of the
    children.  The model's own Ab values are irrelevant (shadowed)."""
    if b.is_extended():
        raise SemanticError("lower min/max blocks before evaluating them")
    abset = frozenset(ab)
    base = model - abset
    for abpart in subsets(ab):
        candidate = base | abpart
        if _children_sat(b, candidate, ab, alphabet) and _minimal_witness(
            b, candidate, ab, alphabet
        ):
            return True
    return False


def witness_extensions(
    b: Block,
    model: frozenset[str],
    ab: tuple[str, ...],
    alphabet: tuple[str, ...] | None = None,
    cap: int = DEFAULT_CAP,
) -> list[frozenset[str]]:
    """All abnormality completions of ``model`` that witness the block, in
    canonical order; empty iff the model does not satisfy the block."""
    if alphabet is None:
        out: dict[str, None] = {}
        for a in ab:
            out.setdefault(a)
        from .theory import _ordered_child_atoms

        _ordered_child_atoms(b, out)
        alphabet = tuple(out)
    _check_cap(alphabet, cap)
    if b.is_extended():
        raise SemanticError("lower min/max blocks before evaluating them")
    abset = frozenset(ab)
    base = model - abset
    found = []
    for abpart in subsets(ab):
        candidate = base | abpart
        if _children_sat(b, candidate, ab, alphabet) and _minimal_witness(
            b, candidate, ab, alphabet
        ):
            found.append(candidate)
    found.sort(key=model_sort_key(alphabet))
    return found


def nat_sat(
    t: Nat, model: frozenset[str], alphabet: tuple[str, ...] | None = None
) -> bool:
    """Truth of a theory in a model given over the non-Ab letters.

    Top-level formulas may mention abnormality letters; those are read
    existentially, consistent with reporting models over At∖Ab.
    """
    if alphabet is None:
        alphabet = nat_alphabet(t)
    base = model - frozenset(t.ab)
    blocks_ok = all(
        block_sat(b, base, t.ab, alphabet) for b in t.blocks()
    )
    if not blocks_ok:
        return False
    formulas = t.formulas()
    if not formulas:
        return True
    for abpart in subsets(t.ab):
        n = base | abpart
        if all(evaluate(f, n) for f in formulas):
            return True
    return False


def brute_models_nat(t: Nat, cap: int = DEFAULT_CAP) -> list[frozenset[str]]:
    """Exact model set of a theory over its non-Ab letters, canonical order.
    Extended (min/max) blocks are lowered first."""
    require_valid(t)
    if uses_minmax(t):
        from .transforms import lower_extended

        t, _ = lower_extended(t)
    alphabet = nat_alphabet(t)
    _check_cap(alphabet, cap)
    abset = frozenset(t.ab)
    free = tuple(a for a in alphabet if a not in abset)
    return [m for m in assignments(free) if nat_sat(t, m, alphabet)]


# ---------------------------------------------------------------------------
# prioritized preference (for testing the priority-tower compiler)


def prioritized_prefer(
    m: frozenset[str],
    n: frozenset[str],
    levels: tuple[tuple[str, ...], ...],
    floating: frozenset[str],
    alphabet: tuple[str, ...],
) -> str:
    """Lexicographic preference: compare level by level, earlier levels first;
    fixed letters must agree."""
    level_union: set[str] = set()
    for lv in levels:
        level_union.update(lv)
    fixed = frozenset(alphabet) - level_union - floating
    if m & fixed != n & fixed:
        return "incomparable"
    for lv in levels:
        lvset = frozenset(lv)
        mp, np = m & lvset, n & lvset
        if mp == np:
            continue
        if mp < np:
            return "less"
        if np < mp:
            return "greater"
        return "incomparable"
    return "equal"
