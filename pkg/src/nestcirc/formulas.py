"""Formula ASTs.

One immutable node hierarchy serves three layers of the package:

* plain propositional formulas (no ``Circ``, no quantifiers);
* circumscribed formulas, which add ``Circ(body; minimized; floating)`` atoms;
* quantified Boolean formulas, which add ``Forall``/``Exists`` (these are only
  produced internally by translations -- the surface syntax has no quantifiers).

``And``/``Or`` are n-ary.  The smart constructors ``conj``/``disj`` flatten
nested conjunctions/disjunctions and drop constant units so that structurally
equal formulas compare equal; parsers and translations build through them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Circ(Formula):
    """Circumscriptive atom: minimize ``minimized``, let ``floating`` vary.

    The letter lists are part of the syntax; the atoms listed there count as
    occurrences, whether or not they appear in the body.
    """

    body: Formula
    minimized: tuple[str, ...]
    floating: tuple[str, ...]


@dataclass(frozen=True)
class Forall(Formula):
    bound: tuple[str, ...]
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    bound: tuple[str, ...]
    body: Formula


# ---------------------------------------------------------------------------
# smart constructors


def lnot(f: Formula) -> Formula:
    if isinstance(f, Const):
        return Const(not f.value)
    return Not(f)


def _gather(args: Iterable[Formula], kind) -> Iterator[Formula]:
    for a in args:
        if isinstance(a, kind):
            yield from a.args
        else:
            yield a


def conj(args: Iterable[Formula]) -> Formula:
    flat = []
    for a in _gather(args, And):
        if isinstance(a, Const):
            if not a.value:
                return FALSE
            continue
        flat.append(a)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(args: Iterable[Formula]) -> Formula:
    flat = []
    for a in _gather(args, Or):
        if isinstance(a, Const):
            if a.value:
                return TRUE
            continue
        flat.append(a)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def implies(left: Formula, right: Formula) -> Formula:
    return Implies(left, right)


def iff(left: Formula, right: Formula) -> Formula:
    return Iff(left, right)


# ---------------------------------------------------------------------------
# structural queries


def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformula nodes, preorder."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, (Implies, Iff)):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, (Circ, Forall, Exists)):
            stack.append(g.body)


def atoms(f: Formula) -> frozenset[str]:
    """Every atom name occurring anywhere, including circumscription letter
    lists and quantifier binders."""
    out: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, Circ):
            out.update(g.minimized)
            out.update(g.floating)
        elif isinstance(g, (Forall, Exists)):
            out.update(g.bound)
    return frozenset(out)


def free_atoms(f: Formula) -> frozenset[str]:
    """Atom names with a free occurrence (circ letter lists count as free)."""
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Not):
        return free_atoms(f.arg)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for a in f.args:
            out |= free_atoms(a)
        return out
    if isinstance(f, (Implies, Iff)):
        return free_atoms(f.left) | free_atoms(f.right)
    if isinstance(f, Circ):
        return free_atoms(f.body) | frozenset(f.minimized) | frozenset(f.floating)
    if isinstance(f, (Forall, Exists)):
        return free_atoms(f.body) - frozenset(f.bound)
    raise TypeError(f"not a formula: {f!r}")


def is_propositional(f: Formula) -> bool:
    return not any(isinstance(g, (Circ, Forall, Exists)) for g in subformulas(f))


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, (Forall, Exists)) for g in subformulas(f))


def nesting_depth(f: Formula) -> int:
    """Maximum number of circumscriptive atoms along any root-to-leaf path."""
    if isinstance(f, (Atom, Const)):
        return 0
    if isinstance(f, Not):
        return nesting_depth(f.arg)
    if isinstance(f, (And, Or)):
        return max((nesting_depth(a) for a in f.args), default=0)
    if isinstance(f, (Implies, Iff)):
        return max(nesting_depth(f.left), nesting_depth(f.right))
    if isinstance(f, Circ):
        return 1 + nesting_depth(f.body)
    if isinstance(f, (Forall, Exists)):
        return nesting_depth(f.body)
    raise TypeError(f"not a formula: {f!r}")


def size(f: Formula) -> int:
    """Node count; letters listed in circ atoms and binders count one each."""
    if isinstance(f, (Atom, Const)):
        return 1
    if isinstance(f, Not):
        return 1 + size(f.arg)
    if isinstance(f, (And, Or)):
        return 1 + sum(size(a) for a in f.args)
    if isinstance(f, (Implies, Iff)):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, Circ):
        return 1 + size(f.body) + len(f.minimized) + len(f.floating)
    if isinstance(f, (Forall, Exists)):
        return 1 + len(f.bound) + size(f.body)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# rewriting


def fold(f: Formula) -> Formula:
    """One constant-folding pass over the top node (children assumed folded)."""
    if isinstance(f, Not):
        if isinstance(f.arg, Const):
            return Const(not f.arg.value)
        return f
    if isinstance(f, And):
        return conj(f.args)
    if isinstance(f, Or):
        return disj(f.args)
    if isinstance(f, Implies):
        if isinstance(f.left, Const):
            return f.right if f.left.value else TRUE
        if isinstance(f.right, Const):
            return TRUE if f.right.value else lnot(f.left)
        return f
    if isinstance(f, Iff):
        if isinstance(f.left, Const):
            return f.right if f.left.value else lnot(f.right)
        if isinstance(f.right, Const):
            return f.left if f.right.value else lnot(f.left)
        return f
    if isinstance(f, Circ):
        # A circumscription of an unsatisfiable body has no models; nothing
        # else folds (Circ(true;P;Z) still constrains P).
        if f.body == FALSE:
            return FALSE
        return f
    if isinstance(f, (Forall, Exists)):
        if isinstance(f.body, Const):
            return f.body
        return f
    return f


def substitute(f: Formula, assignment: Mapping[str, bool]) -> Formula:
    """Replace atoms by truth constants and fold.

    Letters assigned inside a circ atom's lists are dropped from the lists
    (their role is void once they are constants); quantified occurrences are
    untouched.
    """
    if isinstance(f, Atom):
        if f.name in assignment:
            return Const(assignment[f.name])
        return f
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return fold(Not(substitute(f.arg, assignment)))
    if isinstance(f, And):
        return conj(substitute(a, assignment) for a in f.args)
    if isinstance(f, Or):
        return disj(substitute(a, assignment) for a in f.args)
    if isinstance(f, Implies):
        return fold(Implies(substitute(f.left, assignment), substitute(f.right, assignment)))
    if isinstance(f, Iff):
        return fold(Iff(substitute(f.left, assignment), substitute(f.right, assignment)))
    if isinstance(f, Circ):
        return fold(
            Circ(
                substitute(f.body, assignment),
                tuple(p for p in f.minimized if p not in assignment),
                tuple(z for z in f.floating if z not in assignment),
            )
        )
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in assignment.items() if k not in f.bound}
        return fold(type(f)(f.bound, substitute(f.body, inner)))
    raise TypeError(f"not a formula: {f!r}")


def rename_free(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rename free atom occurrences, circ letter lists included.

    Raises if a renaming target would be captured by a quantifier; the
    translations that use this always rename to globally fresh letters.
    """
    if isinstance(f, Atom):
        return Atom(mapping.get(f.name, f.name))
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(rename_free(f.arg, mapping))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(rename_free(a, mapping) for a in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(rename_free(f.left, mapping), rename_free(f.right, mapping))
    if isinstance(f, Circ):
        return Circ(
            rename_free(f.body, mapping),
            tuple(mapping.get(p, p) for p in f.minimized),
            tuple(mapping.get(z, z) for z in f.floating),
        )
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k not in f.bound}
        if any(v in f.bound for v in inner.values()):
            raise ValueError("renaming would be captured by a quantifier")
        return type(f)(f.bound, rename_free(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


def evaluate(f: Formula, model: frozenset[str] | set[str]) -> bool:
    """Truth value of a propositional formula under a set of true atoms.

    Rejects circ atoms and quantifiers; those live in the semantics and qbf
    modules respectively.
    """
    if isinstance(f, Atom):
        return f.name in model
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.arg, model)
    if isinstance(f, And):
        return all(evaluate(a, model) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, model) for a in f.args)
    if isinstance(f, Implies):
        return (not evaluate(f.left, model)) or evaluate(f.right, model)
    if isinstance(f, Iff):
        return evaluate(f.left, model) == evaluate(f.right, model)
    raise TypeError(f"cannot evaluate {type(f).__name__} propositionally")


FormulaLike = Union[Formula]
