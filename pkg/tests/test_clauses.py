"""Clause recognition and the linear-time least-model computation."""

import random
from itertools import chain, combinations

from hypothesis import given, settings, strategies as st

from nestcirc.clauses import Clause, clause_formula, clause_of, cnf_of, is_horn_cnf
from nestcirc.horn import clauses_satisfied, least_model
from nestcirc.parser import parse_formula

from helpers import rand_clause


def test_clause_of_recognizes_implication_shapes():
    assert clause_of(parse_formula("p & q -> r")) == Clause(("r",), ("p", "q"))
    assert clause_of(parse_formula("~p | ~q | r")) == Clause(("r",), ("p", "q"))
    assert clause_of(parse_formula("p")) == Clause(("p",), ())
    assert clause_of(parse_formula("~p")) == Clause((), ("p",))
    assert clause_of(parse_formula("p -> false")) == Clause((), ("p",))


def test_clause_of_declines_non_clauses():
    assert clause_of(parse_formula("p <-> q")) is None
    assert clause_of(parse_formula("p & q")) is None
    assert clause_of(parse_formula("(p | q) & r")) is None


def test_clause_of_dedupes_but_keeps_tautologies():
    c = clause_of(parse_formula("p | p | ~q | ~q"))
    assert c == Clause(("p",), ("q",))
    t = clause_of(parse_formula("p | ~p"))
    assert t is not None and t.is_tautology()


def test_cnf_of_splits_conjunctions():
    cs = cnf_of(parse_formula("(p -> q) & ~r & (q & r -> s)"))
    assert cs == [
        Clause(("q",), ("p",)),
        Clause((), ("r",)),
        Clause(("s",), ("q", "r")),
    ]
    assert cnf_of(parse_formula("true")) == []
    assert cnf_of(parse_formula("false")) == [Clause((), ())]
    assert cnf_of(parse_formula("(p <-> q) & r")) is None


def test_is_horn_cnf():
    assert is_horn_cnf(parse_formula("(p -> q) & (q -> r)"))
    assert not is_horn_cnf(parse_formula("p | q"))
    assert not is_horn_cnf(parse_formula("p <-> q"))


def test_clause_formula_roundtrip():
    for text in ["p | ~q | r", "~p", "p", "p | q"]:
        c = clause_of(parse_formula(text))
        assert clause_of(clause_formula(c)) == c
    assert clause_formula(Clause((), ())) == parse_formula("false")


# ---------------------------------------------------------------- least model


def _brute_least(cls, letters):
    best = None
    for k in range(len(letters) + 1):
        for sub in combinations(letters, k):
            m = frozenset(sub)
            if clauses_satisfied(cls, m):
                if best is None:
                    best = m
                else:
                    # Horn sets have a unique minimal model; a second
                    # incomparable minimum would falsify the propagation
                    assert best <= m
        if best is not None:
            return best
    return None


def test_least_model_hand_cases():
    cls = [Clause(("p",), ()), Clause(("q",), ("p",)), Clause(("r",), ("s",))]
    assert least_model(cls) == {"p", "q"}
    assert least_model([Clause((), ("p",))]) == frozenset()
    assert least_model([Clause(("p",), ()), Clause((), ("p",))]) is None
    assert least_model([Clause((), ())]) is None
    assert least_model([]) == frozenset()


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 29), st.integers(1, 6))
def test_least_model_matches_brute_force(seed, n):
    rng = random.Random(seed)
    pool = ["p", "q", "r", "s"]
    cls = [clause_of(rand_clause(rng, pool)) for _ in range(n)]
    got = least_model(cls)
    want = _brute_least(cls, pool)
    assert got == want
    if got is not None:
        assert clauses_satisfied(cls, got)
