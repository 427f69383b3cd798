"""Model-theoretic core: preference orders and brute-force model sets.

The brute-force evaluators here are the oracles every other strategy is
checked against, so this file leans on hand-computed tables.
"""

import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from nestcirc.errors import CapExceeded, SemanticError
from nestcirc.formulas import Atom, Circ, Implies, Not, Or
from nestcirc.parser import parse_formula, parse_nat
from nestcirc.semantics import (
    DEFAULT_CAP,
    PrefContext,
    assignments,
    brute_models_lcirc,
    brute_models_nat,
    model_sort_key,
    nat_sat,
    prefer,
    prioritized_prefer,
    sat_circ,
    subsets,
    witness_extensions,
)

from helpers import rand_prop_full


def fs(*names):
    return frozenset(names)


# ----------------------------------------------------------------- plumbing


def test_assignments_canonical_order():
    got = list(assignments(("p", "q")))
    assert got == [fs(), fs("q"), fs("p"), fs("p", "q")]
    assert sorted(got, key=model_sort_key(("p", "q"))) == got


def test_subsets_covers_powerset():
    assert len(list(subsets(("a", "b", "c")))) == 8


def test_cap_guard():
    big = tuple(f"x{i}" for i in range(DEFAULT_CAP + 1))
    with pytest.raises(CapExceeded):
        brute_models_lcirc(Atom("x0"), big)
    # an explicit cap raises the limit
    assert brute_models_lcirc(Atom("x0"), ("x0",), cap=1) == [fs("x0")]


# ---------------------------------------------------------------- preference


CTX = PrefContext(("p", "q", "r", "s"), minimized=fs("p", "q"), floating=fs("r"))


def test_prefer_table():
    assert CTX.fixed == fs("s")
    assert prefer(fs("p"), fs("p", "q"), CTX) == "less"
    assert prefer(fs("p", "q"), fs("p"), CTX) == "greater"
    assert prefer(fs("p", "r"), fs("p"), CTX) == "equal"
    assert prefer(fs("p"), fs("q"), CTX) == "incomparable"
    # differing fixed part blocks comparison outright
    assert prefer(fs("s"), fs(), CTX) == "incomparable"
    assert prefer(fs("p", "s"), fs("p", "q", "s"), CTX) == "less"


def test_prefer_rejects_foreign_atoms():
    with pytest.raises(SemanticError):
        prefer(fs("z"), fs(), CTX)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 65535))
def test_prefer_is_a_strict_partial_order_on_fixed_equal_pairs(bits):
    alphabet = ("p", "q", "r", "s")
    ms = [
        frozenset(x for i, x in enumerate(alphabet) if (bits >> (4 * j + i)) & 1)
        for j in range(3)
    ]
    a, b, c = ms
    assert prefer(a, a, CTX) == "equal"
    flip = {"less": "greater", "greater": "less"}
    ab = prefer(a, b, CTX)
    assert prefer(b, a, CTX) == flip.get(ab, ab)
    # transitivity of the strict part
    if ab == "less" and prefer(b, c, CTX) == "less":
        assert prefer(a, c, CTX) == "less"


# ------------------------------------------------------- circumscribed models


def test_void_circumscription_is_transparent():
    f = parse_formula("p -> q")
    alpha = ("p", "q")
    void = Circ(f, (), ())
    assert brute_models_lcirc(void, alpha) == [
        m for m in assignments(alpha) if sat_circ(f, m, alpha)
    ]


def test_classic_minimization():
    # minimize p with q floating: q absorbs the disjunction, p never true
    f = parse_formula("circ(p | q; p; q)")
    assert brute_models_lcirc(f) == [fs("q")]
    # q fixed instead: p flips on only when the fixed part forces it
    g = parse_formula("circ(p | q; p;)")
    assert brute_models_lcirc(g) == [fs("q"), fs("p")]


def test_nested_circ_example():
    f = parse_formula("circ(circ(p | q; p; q) | r; r; p q)")
    want = [m for m in assignments(("p", "q", "r")) if sat_circ(f, m, ("p", "q", "r"))]
    assert brute_models_lcirc(f) == want
    assert fs("q") in want and fs("r") not in want


def test_negated_circ_atom_is_just_complement():
    inner = parse_formula("circ(p | q; p; q)")
    f = Not(inner)
    alpha = ("p", "q")
    inner_models = set(brute_models_lcirc(inner, alpha))
    assert set(brute_models_lcirc(f, alpha)) == set(assignments(alpha)) - inner_models


def test_replacement_by_equivalent_body():
    # two logically equivalent bodies give the same circumscribed models
    a = parse_formula("circ(p -> q; p q;)")
    b = parse_formula("circ(~p | q; p q;)")
    assert brute_models_lcirc(a, ("p", "q")) == brute_models_lcirc(b, ("p", "q"))


# ----------------------------------------------------------- theory semantics


CANARY = "ab ab; { f : f -> ab, { f : b & ~ab -> f, c -> b, c } }"


def test_canary_inner_block_witnesses():
    t = parse_nat(CANARY)
    (outer,) = t.blocks()
    (inner,) = outer.block_children()
    alpha = ("ab", "b", "c", "f")
    # the intended world: the bird flies, nothing abnormal
    assert witness_extensions(inner, fs("b", "c", "f"), t.ab, alpha) == [
        fs("b", "c", "f")
    ]
    # a world where it does not fly needs the abnormality switched on,
    # but minimality then rejects the extension
    assert witness_extensions(inner, fs("b", "c"), t.ab, alpha) == []


def test_canary_theory_models():
    t = parse_nat(CANARY)
    assert brute_models_nat(t) == [fs("b", "c", "f")]
    assert nat_sat(t, fs("b", "c", "f"))
    assert not nat_sat(t, fs("b", "c"))


def test_min_max_blocks_must_be_lowered_first():
    t = parse_nat("ab a; { p ; min q : a }")
    (b,) = t.blocks()
    with pytest.raises(SemanticError):
        witness_extensions(b, fs(), t.ab)


def test_empty_described_block_checks_children_only():
    t = parse_nat("ab a; { ~ : p | ~a }")
    models = brute_models_nat(t)
    # witness needs a=0 by minimality, so p must hold or a stays off
    assert models == [fs(), fs("p")]


def test_grouping_invariance():
    # one block with two clauses versus two sibling blocks over the same
    # letters: the described-letter union drives the preference either way
    one = parse_nat("ab a; { p q : p -> a, q -> a }")
    two = parse_nat("ab a; { p : p -> a } { q : q -> a }")
    assert brute_models_nat(one) == brute_models_nat(two)


# ---------------------------------------------------------------- priorities


def test_prioritized_prefer_lexicographic():
    levels = (("p",), ("q",))
    alpha = ("p", "q", "r")
    # earlier level dominates
    assert prioritized_prefer(fs(), fs("p", "q"), levels, fs(), alpha) == "less"
    assert prioritized_prefer(fs("q"), fs("p"), levels, fs(), alpha) == "less"
    assert prioritized_prefer(fs("p"), fs("q"), levels, fs(), alpha) == "greater"
    # equal on every level
    assert prioritized_prefer(fs("p"), fs("p"), levels, fs(), alpha) == "equal"
    # r is fixed here: disagreement blocks comparison
    assert prioritized_prefer(fs("r"), fs(), levels, fs(), alpha) == "incomparable"
    # ... unless r floats
    assert prioritized_prefer(fs("r"), fs(), levels, fs("r"), alpha) == "equal"


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 29))
def test_single_level_priorities_reduce_to_prefer(seed):
    rng = random.Random(seed)
    alpha = ("p", "q", "r", "s")
    minimized = frozenset(a for a in alpha if rng.random() < 0.5)
    floating = frozenset(a for a in alpha if a not in minimized and rng.random() < 0.5)
    ctx = PrefContext(alpha, minimized, floating)
    m = frozenset(a for a in alpha if rng.random() < 0.5)
    n = frozenset(a for a in alpha if rng.random() < 0.5)
    assert prioritized_prefer(
        m, n, (tuple(sorted(minimized)),), floating, alpha
    ) == prefer(m, n, ctx)
