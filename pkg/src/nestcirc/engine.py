"""Query answering over circumscribed formulas and abnormality theories.

Each query (model check, inference, satisfiability, model listing) can be
answered by several strategies:

``brute``  enumerate interpretations against the defining semantics
``qbf``    translate to a quantified boolean formula and evaluate it
``horn``   the polynomial procedures, where their preconditions hold
``auto``   horn when applicable, otherwise qbf

``verify=True`` answers with a second, independent strategy as well and
raises :class:`~nestcirc.errors.VerifyFailed` on disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import horn as _horn
from .errors import SemanticError, VerifyFailed
from .formulas import Exists, Forall, Formula, Implies
from .formulas import atoms as formula_atoms
from .formulas import is_propositional, nesting_depth, size
from .qbf import circ_to_qbf, eval_qbf, nat_to_qbf
from .semantics import (
    DEFAULT_CAP,
    _check_cap,
    brute_models_lcirc,
    brute_models_nat,
    nat_sat,
    sat_circ,
)
from .theory import (
    Nat,
    block_count,
    fixed_letters,
    formula_alphabet,
    free_letters,
    has_fixed_letters,
    is_horn,
    iter_blocks,
    nat_alphabet,
    nat_depth,
    require_valid,
    unstable_fixed_letters,
    uses_minmax,
    validate_circ_formula,
)
from .transforms import lower_extended

STRATEGIES = ("auto", "horn", "brute", "qbf")


@dataclass(frozen=True)
class Answer:
    value: bool
    strategy: str
    verified_by: str | None = None


def _quantify(kind, names: tuple[str, ...], f: Formula) -> Formula:
    return kind(tuple(names), f) if names else f


def _merge_alphabet(base: tuple[str, ...], extra) -> tuple[str, ...]:
    out = list(base)
    seen = set(base)
    for a in extra:
        if a not in seen:
            seen.add(a)
            out.append(a)
    return tuple(out)


def _check_strategy(strategy: str) -> None:
    if strategy not in STRATEGIES:
        raise SemanticError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# applicability of the polynomial paths


def _top_formulas_ab_free(t: Nat) -> bool:
    abset = frozenset(t.ab)
    return all(not (formula_atoms(f) & abset) for f in t.formulas())


def _horn_check_applicable(t: Nat) -> bool:
    return (
        is_horn(t)
        and not uses_minmax(t)
        and _top_formulas_ab_free(t)
        and not unstable_fixed_letters(t)
    )


def _extended0_applicable(t: Nat) -> bool:
    """Every block a depth-0 Horn block (min/max lists allowed), every
    top-level formula free of abnormality letters."""
    if not _top_formulas_ab_free(t) or not is_horn(t):
        return False
    return all(not b.block_children() for b in t.blocks())


def _horn_infer_applicable(t: Nat, conclusion: Formula) -> bool:
    from .clauses import cnf_of

    return (
        is_horn(t)
        and not uses_minmax(t)
        and not has_fixed_letters(t)
        and _top_formulas_ab_free(t)
        and is_propositional(conclusion)
        and cnf_of(conclusion) is not None
    )


def _horn_sat_applicable(t: Nat) -> bool:
    return (
        is_horn(t)
        and not uses_minmax(t)
        and not has_fixed_letters(t)
        and _top_formulas_ab_free(t)
    )


# ---------------------------------------------------------------------------
# input hygiene


def _circ_model(f: Formula, model: frozenset[str]) -> tuple[str, ...]:
    validate_circ_formula(f)
    alphabet = formula_alphabet(f)
    unknown = model - set(alphabet)
    if unknown:
        raise SemanticError(f"unknown letter {sorted(unknown)[0]!r} in model")
    return alphabet

def _nat_model(t: Nat, model: frozenset[str]) -> tuple[str, ...]:
    require_valid(t)
    bad = model & set(t.ab)
    if bad:
        raise SemanticError(
            f"models are given over the non-abnormality letters; drop {sorted(bad)[0]!r}"
        )
    free = free_letters(t)
    unknown = model - set(free)
    if unknown:
        raise SemanticError(f"unknown letter {sorted(unknown)[0]!r} in model")
    return free


def _nat_conclusion(t: Nat, conclusion: Formula) -> None:
    bad = formula_atoms(conclusion) & frozenset(t.ab)
    if bad:
        raise SemanticError(
            f"conclusions must not mention abnormality letters ({sorted(bad)[0]!r})"
        )


def _lowered(t: Nat) -> Nat:
    return lower_extended(t)[0] if uses_minmax(t) else t


# ---------------------------------------------------------------------------
# model checking


def _check_once(obj, model: frozenset[str], strategy: str, cap: int) -> tuple[bool, str]:
    if isinstance(obj, Nat):
        free = _nat_model(obj, model)
        if strategy == "auto":
            if _horn_check_applicable(obj) or _extended0_applicable(obj):
                strategy = "horn"
            else:
                strategy = "qbf"
        if strategy == "horn":
            if _horn_check_applicable(obj):
                return _horn.horn_check_model(obj, model), "horn"
            if _extended0_applicable(obj):
                alphabet = nat_alphabet(obj)
                for f in obj.formulas():
                    from .formulas import evaluate

                    if not evaluate(f, model):
                        return False, "horn"
                return (
                    all(
                        _horn.extended0_check(b, model, obj.ab, alphabet)
                        for b in obj.blocks()
                    ),
                    "horn",
                )
            raise SemanticError("no polynomial check applies to this theory")
        low = _lowered(obj)
        if strategy == "brute":
            alphabet = nat_alphabet(low)
            _check_cap(free, cap)
            return nat_sat(low, model, alphabet), "brute"
        _check_cap(free, cap)
        closed = _quantify(Exists, low.ab, nat_to_qbf(low))
        env = {a: a in model for a in free_letters(low)}
        return eval_qbf(closed, env), "qbf"
    alphabet = _circ_model(obj, model)
    if strategy in ("auto", "qbf"):
        _check_cap(alphabet, cap)
        return eval_qbf(circ_to_qbf(obj), {a: a in model for a in alphabet}), "qbf"
    if strategy == "brute":
        _check_cap(alphabet, cap)
        return sat_circ(obj, model, alphabet), "brute"
    raise SemanticError("no polynomial check applies to circumscribed formulas")


def check_model(
    obj,
    model: frozenset[str],
    strategy: str = "auto",
    cap: int = DEFAULT_CAP,
    verify: bool = False,
) -> Answer:
    """Is ``model`` (over the non-abnormality letters for theories, over all
    letters for formulas) a model of ``obj``?"""
    _check_strategy(strategy)
    value, used = _check_once(obj, model, strategy, cap)
    if not verify:
        return Answer(value, used)
    other = "brute" if used != "brute" else "qbf"
    again, _ = _check_once(obj, model, other, cap)
    if again != value:
        raise VerifyFailed(
            f"check: strategy {used!r} says {value}, {other!r} says {again}"
        )
    return Answer(value, used, other)


# ---------------------------------------------------------------------------
# inference


def _infer_once(obj, conclusion: Formula, strategy: str, cap: int) -> tuple[bool, str]:
    if isinstance(obj, Nat):
        require_valid(obj)
        validate_circ_formula(conclusion)
        _nat_conclusion(obj, conclusion)
        if strategy == "auto":
            strategy = "horn" if _horn_infer_applicable(obj, conclusion) else "qbf"
        if strategy == "horn":
            if not _horn_infer_applicable(obj, conclusion):
                raise SemanticError("no polynomial inference applies here")
            return _horn.horn_infer_cnf(obj, conclusion), "horn"
        low = _lowered(obj)
        free = _merge_alphabet(free_letters(obj), sorted(formula_atoms(conclusion)))
        _check_cap(free, cap)
        if strategy == "brute":
            alphabet = _merge_alphabet(nat_alphabet(low), free)
            from .semantics import assignments

            return (
                all(
                    sat_circ(conclusion, m, free)
                    for m in assignments(free)
                    if nat_sat(low, m, alphabet)
                ),
                "brute",
            )
        premise = _quantify(Exists, low.ab, nat_to_qbf(low))
        closed = _quantify(
            Forall, free, Implies(premise, circ_to_qbf(conclusion))
        )
        return eval_qbf(closed, {}), "qbf"
    validate_circ_formula(obj)
    validate_circ_formula(conclusion)
    alphabet = _merge_alphabet(
        formula_alphabet(obj), formula_alphabet(conclusion)
    )
    _check_cap(alphabet, cap)
    if strategy == "auto":
        strategy = "qbf"
    if strategy == "brute":
        from .semantics import assignments

        return (
            all(
                sat_circ(conclusion, m, alphabet)
                for m in assignments(alphabet)
                if sat_circ(obj, m, alphabet)
            ),
            "brute",
        )
    if strategy == "qbf":
        closed = _quantify(
            Forall, alphabet, Implies(circ_to_qbf(obj), circ_to_qbf(conclusion))
        )
        return eval_qbf(closed, {}), "qbf"
    raise SemanticError("no polynomial inference applies to circumscribed formulas")


def infer(
    obj,
    conclusion: Formula,
    strategy: str = "auto",
    cap: int = DEFAULT_CAP,
    verify: bool = False,
) -> Answer:
    """Does every model of ``obj`` satisfy ``conclusion``?"""
    _check_strategy(strategy)
    value, used = _infer_once(obj, conclusion, strategy, cap)
    if not verify:
        return Answer(value, used)
    other = "brute" if used != "brute" else "qbf"
    again, _ = _infer_once(obj, conclusion, other, cap)
    if again != value:
        raise VerifyFailed(
            f"infer: strategy {used!r} says {value}, {other!r} says {again}"
        )
    return Answer(value, used, other)


# ---------------------------------------------------------------------------
# satisfiability and model listing


def _sat_once(obj, strategy: str, cap: int) -> tuple[bool, str]:
    if isinstance(obj, Nat):
        require_valid(obj)
        if strategy == "auto":
            strategy = "horn" if _horn_sat_applicable(obj) else "qbf"
        if strategy == "horn":
            if not _horn_sat_applicable(obj):
                raise SemanticError("no polynomial satisfiability test applies here")
            return _horn.flatten(obj).model is not None, "horn"
        low = _lowered(obj)
        free = free_letters(low)
        _check_cap(free, cap)
        if strategy == "brute":
            return bool(brute_models_nat(obj, cap=cap)), "brute"
        closed = _quantify(
            Exists, free, _quantify(Exists, low.ab, nat_to_qbf(low))
        )
        return eval_qbf(closed, {}), "qbf"
    validate_circ_formula(obj)
    alphabet = formula_alphabet(obj)
    _check_cap(alphabet, cap)
    if strategy == "auto":
        strategy = "qbf"
    if strategy == "brute":
        return bool(brute_models_lcirc(obj, alphabet, cap=cap)), "brute"
    if strategy == "qbf":
        return eval_qbf(_quantify(Exists, alphabet, circ_to_qbf(obj)), {}), "qbf"
    raise SemanticError(
        "no polynomial satisfiability test applies to circumscribed formulas"
    )


def satisfiable(
    obj, strategy: str = "auto", cap: int = DEFAULT_CAP, verify: bool = False
) -> Answer:
    """Does ``obj`` have any model?"""
    _check_strategy(strategy)
    value, used = _sat_once(obj, strategy, cap)
    if not verify:
        return Answer(value, used)
    other = "brute" if used != "brute" else "qbf"
    again, _ = _sat_once(obj, other, cap)
    if again != value:
        raise VerifyFailed(
            f"sat: strategy {used!r} says {value}, {other!r} says {again}"
        )
    return Answer(value, used, other)


def models(
    obj, strategy: str = "auto", cap: int = DEFAULT_CAP, verify: bool = False
) -> list[frozenset[str]]:
    """All models in canonical order (over the non-abnormality letters for
    theories).  Exhaustive by nature, so ``horn`` is not available."""
    _check_strategy(strategy)
    if strategy == "horn":
        raise SemanticError("model listing is exhaustive; use brute or qbf")

    def once(how: str) -> list[frozenset[str]]:
        if isinstance(obj, Nat):
            if how == "brute":
                return brute_models_nat(obj, cap=cap)
            low = _lowered(obj)
            free = free_letters(low)
            _check_cap(free, cap)
            from .qbf import qbf_models

            return qbf_models(_quantify(Exists, low.ab, nat_to_qbf(low)), free)
        validate_circ_formula(obj)
        alphabet = formula_alphabet(obj)
        if how == "brute":
            return brute_models_lcirc(obj, alphabet, cap=cap)
        _check_cap(alphabet, cap)
        from .qbf import qbf_models

        return qbf_models(circ_to_qbf(obj), alphabet)

    how = "brute" if strategy == "auto" else strategy
    out = once(how)
    if verify:
        other = "qbf" if how == "brute" else "brute"
        again = once(other)
        if again != out:
            raise VerifyFailed(f"models: {how!r} and {other!r} disagree")
    return out


# ---------------------------------------------------------------------------
# description


def stats(obj) -> dict[str, object]:
    """Structural facts a caller might branch on, in printable form."""
    if isinstance(obj, Nat):
        require_valid(obj)
        fixed: list[str] = []
        for _, b in iter_blocks(obj):
            for q in fixed_letters(b, obj.ab):
                if q not in fixed:
                    fixed.append(q)
        total = sum(size(f) for _, b in iter_blocks(obj) for f in b.formula_children())
        total += sum(size(f) for f in obj.formulas())
        return {
            "kind": "nat",
            "letters": list(nat_alphabet(obj)),
            "ab": list(obj.ab),
            "free": list(free_letters(obj)),
            "blocks": block_count(obj),
            "depth": nat_depth(obj),
            "horn": is_horn(obj),
            "fixed": sorted(fixed),
            "minmax": uses_minmax(obj),
            "size": total,
        }
    validate_circ_formula(obj)
    n_circ = sum(1 for _ in _circ_atoms(obj))
    return {
        "kind": "circ",
        "letters": list(formula_alphabet(obj)),
        "depth": nesting_depth(obj),
        "circ_atoms": n_circ,
        "size": size(obj),
    }


def _circ_atoms(f: Formula):
    from .formulas import Circ, subformulas

    return (g for g in subformulas(f) if isinstance(g, Circ))
