"""Encoding quantified boolean formulas as circumscription queries.

Each generator turns a prenex QBF into an object whose standard query
(entailment of a marker letter, or checking one distinguished model) answers
the truth of the input.  Together they exercise every hardness corner:

``forall_exists``   a single circumscription deciding a 2-block formula
``inference``       a tower of nested blocks, one level per quantifier block
``model_checking``  a tower whose single distinguished model check decides
``horn_tower``      like ``inference`` but Horn throughout, using min/max
                    lists and a letter-vs-twin discipline instead of
                    non-Horn clauses

Input format (see :func:`nestcirc.parser.parse_prenex`)::

    forall x1 x2; exists y1; matrix (x1 | x2) -> y1

Blocks are written outermost first; internally they are indexed from the
innermost (index 1) out, and the innermost block must be existential for the
tower encodings.  Free matrix letters are parameters: the towers read them
as fixed letters, so entailment answers the query for every parameter value
at once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .clauses import cnf_of
from .errors import SemanticError
from .formulas import (
    Atom,
    Circ,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    atoms as formula_atoms,
    conj,
    disj,
    is_propositional,
)
from .qbf import FreshNames, eval_qbf
from .theory import Block, Nat, nat_depth, require_valid

TRUTH_EVAL_LIMIT = 24  # expansion blows up as 2^vars; beyond this, skip


@dataclass(frozen=True)
class PrenexQbfInput:
    """A prenex formula with a propositional matrix.

    ``blocks`` are stored innermost first: ``blocks[0]`` is the block next
    to the matrix.  ``params`` are the matrix letters no block binds.
    """

    blocks: tuple[tuple[str, tuple[str, ...]], ...]
    matrix: Formula
    params: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.blocks)

    def quantifier(self, j: int) -> str:
        """'a' or 'e' for the j-th block, 1-based from the matrix out."""
        return self.blocks[j - 1][0]

    def letters(self, j: int) -> tuple[str, ...]:
        return self.blocks[j - 1][1]

    def bound_letters(self) -> tuple[str, ...]:
        return tuple(x for _, names in self.blocks for x in names)

    def is_closed(self) -> bool:
        return not self.params

    def to_qbf(self) -> Formula:
        f = self.matrix
        for kind, names in self.blocks:
            f = (Exists if kind == "e" else Forall)(names, f)
        return f

    def truth(self, closure: str | None = None) -> bool | None:
        """Truth by expansion; None when free parameters remain unclosed or
        the formula is too large to expand."""
        f = self.to_qbf()
        if self.params:
            if closure == "forall":
                f = Forall(self.params, f)
            elif closure == "exists":
                f = Exists(self.params, f)
            else:
                return None
        if len(self.params) + len(self.bound_letters()) > TRUTH_EVAL_LIMIT:
            return None
        return eval_qbf(f, {})


def prenex_input(
    blocks: tuple[tuple[str, tuple[str, ...]], ...], matrix: Formula
) -> PrenexQbfInput:
    """Validate a parsed prenex formula (blocks outermost-first, as written)
    and flip it to the internal innermost-first order."""
    if not is_propositional(matrix):
        raise SemanticError("the matrix must be a plain propositional formula")
    seen: set[str] = set()
    for kind, names in blocks:
        for x in names:
            if x in seen:
                raise SemanticError(f"letter {x!r} bound twice in the prefix")
            seen.add(x)
    for (k1, _), (k2, _) in zip(blocks, blocks[1:]):
        if k1 == k2:
            raise SemanticError("adjacent blocks with the same quantifier; merge them")
    inner_first = tuple(reversed(blocks))
    params = tuple(
        a for a in sorted(formula_atoms(matrix)) if a not in seen
    )
    return PrenexQbfInput(inner_first, matrix, params)


def _require_inner_exists(inp: PrenexQbfInput) -> None:
    if inp.n == 0:
        raise SemanticError("the prefix must have at least one block")
    if inp.quantifier(1) != "e":
        raise SemanticError("the innermost block must be existential")


def _fresh_for(inp: PrenexQbfInput) -> FreshNames:
    return FreshNames(set(inp.bound_letters()) | set(formula_atoms(inp.matrix)))


# ---------------------------------------------------------------------------
# one circumscription, two blocks


@dataclass(frozen=True)
class ForallExistsEncoding:
    kind = "fe"
    formula: Formula  # a single circumscription
    query: Formula  # entailed iff the input is true
    u: str
    yes_iff_true: bool = True


def encode_forall_exists(inp: PrenexQbfInput) -> ForallExistsEncoding:
    """forall X exists Y psi  holds iff  CIRC(psi | u; u; Y) entails ~u.

    The X letters are fixed, so every X value is tried; u can only be
    minimized away where some Y completion satisfies the matrix."""
    if inp.n != 2 or inp.quantifier(2) != "a" or inp.quantifier(1) != "e":
        raise SemanticError("this encoding needs exactly forall-then-exists")
    fresh = _fresh_for(inp)
    u = fresh.variant("u")
    body = disj([inp.matrix, Atom(u)])
    return ForallExistsEncoding(
        Circ(body, (u,), inp.letters(1)), Not(Atom(u)), u
    )


# ---------------------------------------------------------------------------
# the inference tower


@dataclass(frozen=True)
class TowerEncoding:
    kind = "inf"
    theory: Nat
    query: Formula
    u: str
    ab: str | None
    n: int
    yes_iff_true: bool  # query entailed iff the (closed) input is true
    closure: str | None = None  # "forall" when the parameter wrapper is on


def _phi_u(u: str, ab: str, j: int) -> Formula:
    """The level-j toggle: tie u to the abnormality letter with alternating
    sign, so each wrapper flips which completions are minimal."""
    return Iff(Atom(u), Atom(ab) if j % 2 == 1 else Not(Atom(ab)))


def encode_inference(
    inp: PrenexQbfInput, close_params: bool = False
) -> TowerEncoding:
    """A theory with one block per quantifier alternation whose entailment
    of a marker letter decides the input.

    With ``close_params`` the parameters are described in one extra wrapper
    level, and entailment of u decides the universal closure instead; this
    needs the written prefix to start with forall.
    """
    _require_inner_exists(inp)
    n = inp.n
    if close_params:
        if not inp.params:
            raise SemanticError("no parameters to close over")
        if inp.quantifier(n) != "a":
            raise SemanticError(
                "closing the parameters needs a forall-outermost prefix"
            )
    fresh = _fresh_for(inp)
    u = fresh.variant("u")
    ab = fresh.variant("ab")
    phi = disj([inp.matrix, Atom(u)])
    if n == 1 and not close_params:
        theory = Nat((), (Block((), (phi,)),))
        return TowerEncoding(theory, Atom(u), u, None, n, yes_iff_true=False)
    described: list[str] = list(inp.letters(1)) + [u]
    block = Block(tuple(described), (phi, _phi_u(u, ab, 1)))
    for j in range(2, n):
        described[-1:-1] = inp.letters(j)  # keep u last, for readability
        block = Block(tuple(described), (block, _phi_u(u, ab, j)))
    if close_params:
        described[-1:-1] = list(inp.letters(n)) + list(inp.params)
        block = Block(tuple(described), (block, _phi_u(u, ab, n)))
        theory = Nat((ab,), (block,))
        return TowerEncoding(
            theory, Atom(u), u, ab, n, yes_iff_true=False, closure="forall"
        )
    theory = Nat((ab,), (block,))
    if n % 2 == 1:
        return TowerEncoding(theory, Atom(u), u, ab, n, yes_iff_true=False)
    return TowerEncoding(theory, Not(Atom(u)), u, ab, n, yes_iff_true=True)


# ---------------------------------------------------------------------------
# the model-checking tower


@dataclass(frozen=True)
class CheckEncoding:
    kind = "mc"
    theory: Nat
    model: frozenset[str]
    u: str
    v: str
    ab: str
    n: int
    yes_iff_true: bool  # the model satisfies the theory iff input is true


def encode_model_checking(
    inp: PrenexQbfInput, outer_empty: bool = False
) -> CheckEncoding:
    """A theory and a single model whose check decides the (closed) input.

    The outermost block's letters are not described anywhere; a guard letter
    v and twin abnormality letters force them to behave universally inside
    the one model check.  With ``outer_empty`` that outer letter group is
    empty instead and every block becomes part of the tower.
    """
    _require_inner_exists(inp)
    if inp.params:
        raise SemanticError("this encoding needs a closed input")
    if outer_empty:
        n = inp.n
        outer: tuple[str, ...] = ()
    else:
        if inp.n < 2:
            raise SemanticError(
                "with a nonempty outer group the prefix needs two blocks; "
                "use the outer-empty form for a single block"
            )
        n = inp.n - 1
        outer = inp.letters(inp.n)
    fresh = _fresh_for(inp)
    u = fresh.variant("u")
    v = fresh.variant("v")
    ab = fresh.variant("ab")
    twin = tuple(
        (x, fresh.variant(f"ab_{x}"), fresh.variant(f"ab'_{x}")) for x in outer
    )
    flag = conj([Atom(x) for x in inp.letters(n)] + [Atom(v)])
    phi = disj([inp.matrix, Atom(u), flag])
    if n % 2 == 1:
        phi = conj([phi, Implies(flag, Atom(u))])
    tail: list[Formula] = [_phi_u(u, ab, n)]
    if twin:
        # Exclusivity must hold unconditionally.  Guarding it on the flag
        # would let a competitor drop a twin pair to (0,0) once the flag is
        # off, decoupling the outer letters from the guessed assignment; with
        # the pair pinned, the only strict Ab-subset of a witness drops the
        # toggle letter alone and inherits the guess through the transfer.
        tail.append(conj([Iff(Atom(a), Not(Atom(a2))) for _, a, a2 in twin]))
        tail.append(
            Implies(
                Not(flag), conj([Iff(Atom(x), Atom(a)) for x, a, _ in twin])
            )
        )
    top_described = (
        tuple(x for j in range(1, n + 1) for x in inp.letters(j))
        + outer
        + (u, v)
    )
    if n == 1:
        top = Block(top_described, tuple([phi] + tail))
    else:
        described = list(inp.letters(1)) + [u]
        block = Block(tuple(described), (phi, _phi_u(u, ab, 1)))
        for j in range(2, n):
            described[-1:-1] = inp.letters(j)
            block = Block(tuple(described), (block, _phi_u(u, ab, j)))
        top = Block(top_described, tuple([block] + tail))
    ab_letters = (ab,) + tuple(a for _, a, _ in twin) + tuple(a for _, _, a in twin)
    theory = Nat(ab_letters, (top,))
    model = frozenset(
        x for j in range(1, n + 1) for x in inp.letters(j)
    ) | {v} | ({u} if n % 2 == 1 else frozenset())
    return CheckEncoding(theory, model, u, v, ab, n, yes_iff_true=(n % 2 == 0))


# ---------------------------------------------------------------------------
# the Horn tower


@dataclass(frozen=True)
class HornTowerEncoding:
    kind = "xhorn"
    theory: Nat
    query: Formula
    u: str
    n: int
    yes_iff_true: bool
    twins: tuple[tuple[str, str], ...]  # (letter, its primed twin)


def encode_horn_tower(inp: PrenexQbfInput) -> HornTowerEncoding:
    """The inference tower restated with Horn formulas only.

    Each letter gets a twin; a maximized exclusion block forces every
    letter/twin pair to disagree, and positive matrix literals become
    negative twin literals, leaving every clause Horn.  The lowered form of
    the min/max lists supplies the abnormality letters, so the theory text
    itself declares none.
    """
    _require_inner_exists(inp)
    clauses = cnf_of(inp.matrix)
    if clauses is None:
        raise SemanticError("the Horn tower needs a CNF-shaped matrix")
    n = inp.n
    fresh = _fresh_for(inp)
    u = fresh.variant("u")
    letters = tuple(x for j in range(1, n + 1) for x in inp.letters(j)) + inp.params
    twins = tuple((x, fresh.prime(x)) for x in letters)
    twin_of = dict(twins)
    guarded: list[Formula] = [
        disj(
            [Not(Atom(twin_of[x])) for x in c.pos]
            + [Not(Atom(x)) for x in c.neg]
            + [Atom(u)]
        )
        for c in clauses
    ]
    exclusion = Block(
        (),
        tuple(disj([Not(Atom(x)), Not(Atom(x2))]) for x, x2 in twins),
        max_letters=tuple(x for x, _ in twins) + tuple(x2 for _, x2 in twins),
    )
    if n == 1:
        theory = Nat((), (Block((), tuple(guarded) + (exclusion,)),))
        return HornTowerEncoding(theory, Atom(u), u, n, False, twins)
    described: list[str] = []
    for x in inp.letters(1):
        described += [x, twin_of[x]]
    block = Block(
        tuple(described), tuple(guarded) + (exclusion,), min_letters=(u,)
    )
    for j in range(2, n):
        for x in inp.letters(j):
            described += [x, twin_of[x]]
        if j % 2 == 1:
            block = Block(tuple(described), (block,), min_letters=(u,))
        else:
            block = Block(tuple(described), (block,), max_letters=(u,))
    theory = Nat((), (block,))
    if n % 2 == 1:
        return HornTowerEncoding(theory, Atom(u), u, n, False, twins)
    return HornTowerEncoding(theory, Not(Atom(u)), u, n, True, twins)


# ---------------------------------------------------------------------------
# manifests


def manifest(enc, inp: PrenexQbfInput, ident: str) -> dict[str, object]:
    """One record describing a generated instance, stable field order."""
    closure = getattr(enc, "closure", None)
    truth = inp.truth(closure)
    entry: dict[str, object] = {
        "id": ident,
        "kind": enc.kind,
        "prefix_blocks": inp.n,
        "truth": truth,
    }
    if isinstance(enc, CheckEncoding):
        from .printer import render_model

        entry["model"] = render_model(enc.model)
        entry["check"] = None if truth is None else (truth == enc.yes_iff_true)
    else:
        from .printer import render_formula

        entry["query"] = render_formula(enc.query)
        entry["entailed"] = None if truth is None else (truth == enc.yes_iff_true)
    if isinstance(enc, ForallExistsEncoding):
        from .formulas import size

        entry["letters"] = len(formula_atoms(enc.formula))
        entry["size"] = size(enc.formula)
    else:
        require_valid(enc.theory)
        from .theory import nat_alphabet

        entry["letters"] = len(nat_alphabet(enc.theory))
        entry["ab"] = len(enc.theory.ab)
        entry["depth"] = nat_depth(enc.theory)
    return entry
