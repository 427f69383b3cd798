"""Quantified Boolean formulas: translations, evaluation, prenexing, QDIMACS.

Three translations define the package's semantics-by-translation route:

* ``circ_to_qbf`` maps circumscribed formulas to QBFs via the second-order
  definition of circumscription (each circ atom becomes its body plus a
  universally quantified competitor copy with renamed minimized/floating
  letters);
* ``nat_to_qbf`` maps abnormality theories to QBFs (each block existentially
  projects its abnormality letters around a circumscription of its children;
  the same letters are re-bound, i.e. shadowed, at every nesting level);
* ``nat_to_circ`` maps theories to quantifier-free nested circumscription by
  renaming every block's abnormality group apart and letting the outer blocks
  float all letters that were quantified inside — the model sets agree after
  projecting the renamed letters away.

``prenex_cnf``/``write_qdimacs`` bridge to standard QBF solver input.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .errors import ParseError, SemanticError
from .formulas import (
    FALSE,
    TRUE,
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
    atoms,
    conj,
    disj,
    free_atoms,
    lnot,
    rename_free,
)
from .theory import Block, Nat, formula_alphabet, nat_alphabet


class FreshNames:
    """Deterministic fresh-name source; primes with a counter (a', a'2, ...)."""

    def __init__(self, used):
        self.used = set(used)

    def reserve(self, name: str) -> None:
        self.used.add(name)

    def prime(self, base: str) -> str:
        cand = base + "'"
        k = 1
        while cand in self.used:
            k += 1
            cand = f"{base}'{k}"
        self.used.add(cand)
        return cand

    def variant(self, cand: str) -> str:
        while cand in self.used:
            cand += "'"
        self.used.add(cand)
        return cand


def _competitor(
    body: Formula,
    minimized: tuple[str, ...],
    floating: tuple[str, ...],
    fresh: FreshNames,
) -> Formula:
    """body ∧ ∀P'Z'((body[P';Z'] ∧ P'≤P) → P≤P') — the minimality con-
    straint shared by both translation routes."""
    mapping = {x: fresh.prime(x) for x in (*minimized, *floating)}
    renamed = rename_free(body, mapping)
    below = conj(
        [Implies(Atom(mapping[p]), Atom(p)) for p in minimized]
    )
    above = conj(
        [Implies(Atom(p), Atom(mapping[p])) for p in minimized]
    )
    guard = Forall(
        tuple(mapping[x] for x in (*minimized, *floating)),
        Implies(conj([renamed, below]), above),
    )
    return conj([body, guard])


def circ_to_qbf(f: Formula, fresh: FreshNames | None = None) -> Formula:
    """Translate a circumscribed formula to a QBF with the same free atoms."""
    if fresh is None:
        fresh = FreshNames(atoms(f))
    if isinstance(f, (Atom, Const)):
        return f
    if isinstance(f, Not):
        return Not(circ_to_qbf(f.arg, fresh))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(circ_to_qbf(a, fresh) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(circ_to_qbf(f.left, fresh), circ_to_qbf(f.right, fresh))
    if isinstance(f, Circ):
        # Rename first, then translate: the renaming acts on free occurrences
        # of the listed letters, including inside nested circ atoms' lists.
        body_q = circ_to_qbf(f.body, fresh)
        return _competitor_circ(f, body_q, fresh)
    if isinstance(f, (Forall, Exists)):
        raise SemanticError("input formulas are quantifier-free")
    raise TypeError(f"not a formula: {f!r}")


def _competitor_circ(f: Circ, body_q: Formula, fresh: FreshNames) -> Formula:
    mapping = {x: fresh.prime(x) for x in (*f.minimized, *f.floating)}
    renamed_src = rename_free(f.body, mapping)
    renamed_q = circ_to_qbf(renamed_src, fresh)
    below = conj([Implies(Atom(mapping[p]), Atom(p)) for p in f.minimized])
    above = conj([Implies(Atom(p), Atom(mapping[p])) for p in f.minimized])
    guard = Forall(
        tuple(mapping[x] for x in (*f.minimized, *f.floating)),
        Implies(conj([renamed_q, below]), above),
    )
    return conj([body_q, guard])


# ---------------------------------------------------------------------------
# theories to QBF


def nat_to_qbf(t: Nat, fresh: FreshNames | None = None) -> Formula:
    if fresh is None:
        fresh = FreshNames(nat_alphabet(t))
    parts = []
    for item in t.items:
        if isinstance(item, Block):
            parts.append(_block_to_qbf(item, t.ab, fresh))
        else:
            parts.append(item)
    return conj(parts)


def _block_to_qbf(b: Block, ab: tuple[str, ...], fresh: FreshNames) -> Formula:
    if b.is_extended():
        raise SemanticError("lower min/max blocks before translating")
    parts = []
    for c in b.children:
        if isinstance(c, Block):
            parts.append(_block_to_qbf(c, ab, fresh))
        else:
            parts.append(c)
    body = conj(parts)
    return Exists(ab, _competitor(body, ab, b.described, fresh))


# ---------------------------------------------------------------------------
# theories to quantifier-free nested circumscription


@dataclass(frozen=True)
class StarResult:
    formula: Formula
    renamed: tuple[str, ...]  # the auxiliary letters introduced (A*)


def nat_to_circ(
    t: Nat, float_inner: bool = True, keep_outer: bool = False
) -> StarResult:
    """Quantifier-free form: rename each block's abnormality group apart
    (``<ab>@<path>``), keep the full group minimized, and float every letter
    that was quantified strictly inside (the renamed groups of nested blocks).

    ``keep_outer`` leaves top-level groups unrenamed, so witnesses can be read
    off models directly.  ``float_inner=False`` skips the floating step — an
    intentionally broken variant kept as a regression control, since fixing the
    inner letters admits spurious models.
    """
    fresh = FreshNames(nat_alphabet(t))
    parts = []
    renamed_all: list[str] = []
    block_idx = 0
    for item in t.items:
        if isinstance(item, Block):
            g, inner = _block_to_circ(
                item, t.ab, str(block_idx), fresh, float_inner, keep_outer
            )
            block_idx += 1
            parts.append(g)
            renamed_all.extend(inner)
        else:
            parts.append(item)
    return StarResult(conj(parts), tuple(renamed_all))


def _block_to_circ(
    b: Block,
    ab: tuple[str, ...],
    path: str,
    fresh: FreshNames,
    float_inner: bool,
    keep_top: bool,
) -> tuple[Formula, tuple[str, ...]]:
    """Returns the rewritten block and all letters renamed in its subtree
    (own group first, then nested groups in DFS order)."""
    if b.is_extended():
        raise SemanticError("lower min/max blocks before translating")
    if keep_top:
        mapping = {x: x for x in ab}
        own_group: tuple[str, ...] = ()
    else:
        mapping = {x: fresh.variant(f"{x}@{path}") for x in ab}
        own_group = tuple(mapping.values())
    parts = []
    inner_groups: list[str] = []
    child_idx = 0
    for c in b.children:
        if isinstance(c, Block):
            g, inner = _block_to_circ(
                c, ab, f"{path}.{child_idx}", fresh, float_inner, False
            )
            child_idx += 1
            parts.append(g)
            inner_groups.extend(inner)
        else:
            parts.append(rename_free(c, mapping))
    floating = b.described + (tuple(inner_groups) if float_inner else ())
    minimized = tuple(mapping[x] for x in ab)
    g = Circ(conj(parts), minimized, floating)
    return g, own_group + tuple(inner_groups)


# ---------------------------------------------------------------------------
# evaluation


def eval_qbf(f: Formula, env: Mapping[str, bool]) -> bool:
    """Evaluate a QBF; every free atom must be assigned in ``env``.  Bound
    occurrences shadow outer assignments of the same name."""
    scope = dict(env)

    def go(g: Formula) -> bool:
        if isinstance(g, Atom):
            try:
                return scope[g.name]
            except KeyError:
                raise SemanticError(f"unassigned free atom {g.name!r}") from None
        if isinstance(g, Const):
            return g.value
        if isinstance(g, Not):
            return not go(g.arg)
        if isinstance(g, And):
            return all(go(a) for a in g.args)
        if isinstance(g, Or):
            return any(go(a) for a in g.args)
        if isinstance(g, Implies):
            return (not go(g.left)) or go(g.right)
        if isinstance(g, Iff):
            return go(g.left) == go(g.right)
        if isinstance(g, (Forall, Exists)):
            want = isinstance(g, Exists)
            saved = [scope.get(v, _MISSING) for v in g.bound]
            try:
                for bits in product((False, True), repeat=len(g.bound)):
                    for v, val in zip(g.bound, bits):
                        scope[v] = val
                    if go(g.body) == want:
                        return want
                return not want
            finally:
                for v, old in zip(g.bound, saved):
                    if old is _MISSING:
                        del scope[v]
                    else:
                        scope[v] = old
        if isinstance(g, Circ):
            raise SemanticError("translate circumscriptions before evaluating as QBF")
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


_MISSING = object()


def qbf_models(
    f: Formula, alphabet: tuple[str, ...] | None = None
) -> list[frozenset[str]]:
    """Models over the free atoms (canonical order), by direct evaluation."""
    free = free_atoms(f)
    if alphabet is None:
        alphabet = tuple(a for a in formula_alphabet(f) if a in free)
    out = []
    for bits in product((False, True), repeat=len(alphabet)):
        env = dict(zip(alphabet, bits))
        extra = free - set(alphabet)
        if extra:
            raise SemanticError(f"free atoms outside alphabet: {sorted(extra)}")
        if eval_qbf(f, env):
            out.append(frozenset(a for a, v in env.items() if v))
    return out


# ---------------------------------------------------------------------------
# prenex CNF and QDIMACS


@dataclass(frozen=True)
class PrenexCnf:
    prefix: tuple[tuple[str, tuple[str, ...]], ...]  # ("a"|"e", names)
    clauses: tuple[tuple[int, ...], ...]
    varmap: tuple[str, ...]  # DIMACS number i is varmap[i-1]

    def var(self, name: str) -> int:
        return self.varmap.index(name) + 1


def _nnf(f: Formula, sign: bool, ren: dict[str, str], fresh: FreshNames) -> Formula:
    if isinstance(f, Atom):
        a = Atom(ren.get(f.name, f.name))
        return a if sign else Not(a)
    if isinstance(f, Const):
        return Const(f.value == sign)
    if isinstance(f, Not):
        return _nnf(f.arg, not sign, ren, fresh)
    if isinstance(f, And):
        kind = conj if sign else disj
        return kind([_nnf(a, sign, ren, fresh) for a in f.args])
    if isinstance(f, Or):
        kind = disj if sign else conj
        return kind([_nnf(a, sign, ren, fresh) for a in f.args])
    if isinstance(f, Implies):
        if sign:
            return disj([_nnf(f.left, False, ren, fresh), _nnf(f.right, True, ren, fresh)])
        return conj([_nnf(f.left, True, ren, fresh), _nnf(f.right, False, ren, fresh)])
    if isinstance(f, Iff):
        # Expanded here so each copy's bound variables are renamed apart.
        both = conj(
            [_nnf(f.left, True, ren, fresh), _nnf(f.right, True, ren, fresh)]
        )
        neither = conj(
            [_nnf(f.left, False, ren, fresh), _nnf(f.right, False, ren, fresh)]
        )
        cross1 = conj(
            [_nnf(f.left, True, ren, fresh), _nnf(f.right, False, ren, fresh)]
        )
        cross2 = conj(
            [_nnf(f.left, False, ren, fresh), _nnf(f.right, True, ren, fresh)]
        )
        return disj([both, neither]) if sign else disj([cross1, cross2])
    if isinstance(f, (Forall, Exists)):
        is_forall = isinstance(f, Forall)
        if not sign:
            is_forall = not is_forall
        inner = dict(ren)
        new_vars = []
        for v in f.bound:
            if v in fresh.used:
                nv = fresh.prime(v)
            else:
                nv = v
                fresh.reserve(v)
            inner[v] = nv
            new_vars.append(nv)
        body = _nnf(f.body, sign, inner, fresh)
        kind = Forall if is_forall else Exists
        if isinstance(body, Const):
            return body
        return kind(tuple(new_vars), body)
    if isinstance(f, Circ):
        raise SemanticError("translate circumscriptions before prenexing")
    raise TypeError(f"not a formula: {f!r}")


def _pull(f: Formula) -> tuple[list[tuple[str, list[str]]], Formula]:
    if isinstance(f, (Forall, Exists)):
        q = "a" if isinstance(f, Forall) else "e"
        blocks, matrix = _pull(f.body)
        return [(q, list(f.bound))] + blocks, matrix
    if isinstance(f, (And, Or)):
        blocks: list[tuple[str, list[str]]] = []
        matrices = []
        for a in f.args:
            bs, m = _pull(a)
            blocks.extend(bs)
            matrices.append(m)
        kind = conj if isinstance(f, And) else disj
        return blocks, kind(matrices)
    return [], f


def _clausify(matrix: Formula, fresh: FreshNames) -> tuple[list[list[str | tuple]], list[str]]:
    """Definitional clause form of an NNF matrix.  Only one direction of each
    definition is needed since every subformula occurs positively.  Returns
    clauses over signed names and the auxiliary names in creation order."""
    aux_names: list[str] = []
    clauses: list[list[tuple[str, bool]]] = []

    def new_aux() -> str:
        k = len(aux_names) + 1
        name = fresh.variant(f"_t{k}")
        aux_names.append(name)
        return name

    def lits_of(g: Formula) -> list[tuple[str, bool]]:
        """Literals of g as one clause, introducing aux for conjunctions."""
        if isinstance(g, Atom):
            return [(g.name, True)]
        if isinstance(g, Not):
            assert isinstance(g.arg, Atom)
            return [(g.arg.name, False)]
        if isinstance(g, Or):
            out = []
            for a in g.args:
                out.extend(lits_of(a))
            return out
        if isinstance(g, And):
            aux = new_aux()
            for a in g.args:
                clauses.append([(aux, False)] + lits_of(a))
            return [(aux, True)]
        raise TypeError(f"unexpected node in NNF matrix: {type(g).__name__}")

    if isinstance(matrix, Const):
        if matrix.value:
            return [], aux_names
        return [[]], aux_names
    if isinstance(matrix, And):
        for a in matrix.args:
            clauses.append(lits_of(a))
        # The top-level conjuncts went in directly; any clause list built for
        # them via lits_of would wrap in an aux, so handle Or/literals here:
        # (done: lits_of on each conjunct yields its clause).
        return clauses, aux_names
    clauses.append(lits_of(matrix))
    return clauses, aux_names


def prenex_cnf(f: Formula, closure: str = "exists") -> PrenexCnf:
    """Prenex, rename bound variables apart, clausify with auxiliaries placed
    in one innermost existential block, and close free atoms with the
    requested quantifier (outermost)."""
    if closure not in ("exists", "forall"):
        raise ValueError("closure must be 'exists' or 'forall'")
    free = free_atoms(f)
    free_ordered = [a for a in formula_alphabet(f) if a in free]
    fresh = FreshNames(atoms(f))
    nnf = _nnf(f, True, {}, fresh)
    blocks, matrix = _pull(nnf)
    raw_clauses, aux = _clausify(matrix, fresh)
    prefix: list[tuple[str, list[str]]] = []
    if free_ordered:
        prefix.append(("e" if closure == "exists" else "a", list(free_ordered)))
    prefix.extend(blocks)
    if aux:
        prefix.append(("e", aux))
    # merge adjacent blocks with the same quantifier, drop empties
    merged: list[tuple[str, list[str]]] = []
    for q, names in prefix:
        if not names:
            continue
        if merged and merged[-1][0] == q:
            merged[-1][1].extend(names)
        else:
            merged.append((q, list(names)))
    numbering: dict[str, int] = {}
    for _, names in merged:
        for n in names:
            numbering[n] = len(numbering) + 1
    # clause atoms not in the prefix cannot happen (all free vars closed)
    int_clauses = []
    for cl in raw_clauses:
        int_clauses.append(
            tuple(numbering[n] if s else -numbering[n] for n, s in cl)
        )
    varmap = tuple(sorted(numbering, key=numbering.get))
    return PrenexCnf(
        prefix=tuple((q, tuple(names)) for q, names in merged),
        clauses=tuple(int_clauses),
        varmap=varmap,
    )


def prenex_to_qbf(p: PrenexCnf) -> Formula:
    """Back to a formula tree (for expansion-based checks)."""
    matrix = conj(
        [
            disj([Atom(p.varmap[abs(l) - 1]) if l > 0 else Not(Atom(p.varmap[abs(l) - 1])) for l in cl])
            for cl in p.clauses
        ]
    )
    f = matrix
    for q, names in reversed(p.prefix):
        kind = Forall if q == "a" else Exists
        f = kind(names, f)
    return f


def write_qdimacs(p: PrenexCnf) -> str:
    lines = []
    for i, name in enumerate(p.varmap, start=1):
        lines.append(f"c var {i} {name}")
    lines.append(f"p cnf {len(p.varmap)} {len(p.clauses)}")
    for q, names in p.prefix:
        nums = " ".join(str(p.varmap.index(n) + 1) for n in names)
        lines.append(f"{q} {nums} 0")
    for cl in p.clauses:
        lines.append(" ".join(str(l) for l in cl) + " 0")
    return "\n".join(lines) + "\n"


def read_qdimacs(text: str) -> PrenexCnf:
    names: dict[int, str] = {}
    prefix: list[tuple[str, tuple[str, ...]]] = []
    clauses: list[tuple[int, ...]] = []
    nvars = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 4 and parts[1] == "var":
                names[int(parts[2])] = parts[3]
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("malformed problem line", ln, 1)
            nvars = int(parts[2])
            continue
        if line[0] in "ae":
            nums = [int(x) for x in line.split()[1:]]
            if nums[-1] != 0:
                raise ParseError("quantifier line not 0-terminated", ln, 1)
            prefix.append(
                (line[0], tuple(names.get(n, f"x{n}") for n in nums[:-1]))
            )
            continue
        nums = [int(x) for x in line.split()]
        if nums[-1] != 0:
            raise ParseError("clause not 0-terminated", ln, 1)
        clauses.append(tuple(nums[:-1]))
    if nvars is None:
        raise ParseError("missing problem line")
    varmap = tuple(names.get(i, f"x{i}") for i in range(1, nvars + 1))
    return PrenexCnf(prefix=tuple(prefix), clauses=tuple(clauses), varmap=varmap)
