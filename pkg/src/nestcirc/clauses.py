"""Clause-shaped views of formulas.

The Horn procedures accept theories whose formulas are "CNF-shaped" without
requiring distribution: a formula counts as a clause when it is a literal, a
disjunction of literals, or an implication whose antecedent is a conjunction
of literals and whose consequent is again clause-shaped.  So ``b & ~ab -> f``
is the clause ``~b | ab | f`` and never needs rewriting by hand.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formulas import And, Atom, Const, Formula, Implies, Not, Or, disj, lnot


@dataclass(frozen=True)
class Clause:
    pos: tuple[str, ...]
    neg: tuple[str, ...]

    def is_horn(self) -> bool:
        return len(self.pos) <= 1

    def is_empty(self) -> bool:
        return not self.pos and not self.neg

    def is_tautology(self) -> bool:
        return bool(set(self.pos) & set(self.neg))


def _literal(f: Formula) -> tuple[str, bool] | None:
    if isinstance(f, Atom):
        return f.name, True
    if isinstance(f, Not) and isinstance(f.arg, Atom):
        return f.arg.name, False
    return None


def _conj_literals(f: Formula) -> list[tuple[str, bool]] | None:
    lit = _literal(f)
    if lit is not None:
        return [lit]
    if isinstance(f, Const) and f.value:
        return []
    if isinstance(f, And):
        out = []
        for a in f.args:
            part = _conj_literals(a)
            if part is None:
                return None
            out.extend(part)
        return out
    return None


def _clause_literals(f: Formula) -> list[tuple[str, bool]] | None:
    """Literals of a clause-shaped formula, or None if it is not one."""
    lit = _literal(f)
    if lit is not None:
        return [lit]
    if isinstance(f, Const):
        # `false` is the empty clause; `true` handled by the caller.
        return [] if not f.value else None
    if isinstance(f, Or):
        out = []
        for a in f.args:
            part = _clause_literals(a)
            if part is None:
                return None
            out.extend(part)
        return out
    if isinstance(f, Implies):
        body = _conj_literals(f.left)
        if body is None:
            return None
        head = _clause_literals(f.right)
        if head is None:
            return None
        return [(name, not sign) for name, sign in body] + head
    return None


def _dedupe(names: list[str]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for n in names:
        seen.setdefault(n)
    return tuple(seen)


def clause_of(f: Formula) -> Clause | None:
    lits = _clause_literals(f)
    if lits is None:
        return None
    return Clause(
        pos=_dedupe([n for n, s in lits if s]),
        neg=_dedupe([n for n, s in lits if not s]),
    )


def cnf_of(f: Formula) -> list[Clause] | None:
    """Read ``f`` as a conjunction of clause-shaped formulas.

    ``true`` contributes nothing; ``false`` contributes the empty clause.
    Returns None when some conjunct is not clause-shaped (e.g. contains an
    equivalence), in which case the Horn paths must decline the input.
    """
    if isinstance(f, Const):
        return [] if f.value else [Clause((), ())]
    if isinstance(f, And):
        out: list[Clause] = []
        for a in f.args:
            part = cnf_of(a)
            if part is None:
                return None
            out.extend(part)
        return out
    c = clause_of(f)
    if c is None:
        return None
    return [c]


def is_horn_cnf(f: Formula) -> bool:
    clauses = cnf_of(f)
    return clauses is not None and all(c.is_horn() for c in clauses)


def clause_formula(c: Clause) -> Formula:
    """The clause as a plain disjunction (used when emitting flattened
    theories)."""
    lits: list[Formula] = [Atom(n) for n in c.pos] + [lnot(Atom(n)) for n in c.neg]
    return disj(lits)
