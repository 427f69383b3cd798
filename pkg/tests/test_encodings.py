"""Hardness-encoding generators: prenex inputs, the two-block formula
encoding, the inference tower, the single-check tower, and the Horn tower.

Decisions are checked against plain quantifier expansion (``inp.truth()``),
which shares no code with the brute-force theory evaluator on the other
side of each comparison.
"""

import pytest

from nestcirc.encodings import (
    CheckEncoding,
    ForallExistsEncoding,
    HornTowerEncoding,
    TowerEncoding,
    encode_forall_exists,
    encode_horn_tower,
    encode_inference,
    encode_model_checking,
    manifest,
    prenex_input,
)
from nestcirc.errors import SemanticError
from nestcirc.formulas import Atom, Iff, Implies, Not, evaluate
from nestcirc.parser import parse_formula
from nestcirc.semantics import brute_models_lcirc, brute_models_nat, nat_sat
from nestcirc.theory import (
    formula_alphabet,
    nat_depth,
    uses_minmax,
    validate,
)
from nestcirc.transforms import lower_extended


def _entails(theory, query):
    """Brute-force entailment over the theory's own letters."""
    t = theory
    if uses_minmax(t):
        t, _ = lower_extended(t)
    return all(evaluate(query, m) for m in brute_models_nat(t))


def _decide(enc, inp):
    if isinstance(enc, CheckEncoding):
        yes = nat_sat(enc.theory, enc.model)
    elif isinstance(enc, ForallExistsEncoding):
        alpha = formula_alphabet(enc.formula)
        yes = all(
            evaluate(enc.query, m) for m in brute_models_lcirc(enc.formula, alpha)
        )
    else:
        yes = _entails(enc.theory, enc.query)
    return yes == enc.yes_iff_true


E, A = "e", "a"


def blocks(*pairs):
    return tuple((k, tuple(names.split())) for k, names in pairs)


# ------------------------------------------------------------- prenex input


def test_prenex_input_flips_to_innermost_first():
    inp = prenex_input(blocks((A, "x"), (E, "y")), parse_formula("x -> y"))
    assert inp.n == 2
    assert inp.quantifier(1) == E and inp.letters(1) == ("y",)
    assert inp.quantifier(2) == A and inp.letters(2) == ("x",)
    assert inp.bound_letters() == ("y", "x")
    assert inp.is_closed() and inp.params == ()
    assert inp.truth() is True


def test_prenex_input_collects_parameters():
    inp = prenex_input(blocks((E, "y")), parse_formula("y & z"))
    assert inp.params == ("z",)
    assert not inp.is_closed()
    assert inp.truth() is None  # needs a closure to be decided
    assert inp.truth("exists") is True and inp.truth("forall") is False


def test_prenex_input_validation():
    with pytest.raises(SemanticError):
        prenex_input(blocks((E, "x")), parse_formula("circ(x;x;)"))
    with pytest.raises(SemanticError):
        prenex_input(blocks((E, "x"), (A, "x")), parse_formula("x"))
    with pytest.raises(SemanticError):
        prenex_input(blocks((E, "x"), (E, "y")), parse_formula("x & y"))


def test_inner_block_must_be_existential():
    inp = prenex_input(blocks((A, "x")), parse_formula("x | ~x"))
    for op in (encode_inference, encode_model_checking, encode_horn_tower):
        with pytest.raises(SemanticError):
            op(inp)


# --------------------------------------------------------------- fe encoding


def test_fe_shape():
    inp = prenex_input(blocks((A, "x"), (E, "y")), parse_formula("x <-> y"))
    enc = encode_forall_exists(inp)
    f = enc.formula
    assert f.minimized == (enc.u,) and f.floating == ("y",)
    assert enc.query == Not(Atom(enc.u))
    assert enc.yes_iff_true


def test_fe_decides_two_block_instances():
    rows = [
        ((A, "x"), (E, "y"), "x <-> y", True),
        ((A, "x"), (E, "y"), "x & y", False),
        ((A, "x1 x2"), (E, "y"), "(x1 | x2) -> y", True),
        ((A, "x"), (E, "y1 y2"), "y1 & (y2 <-> ~x)", True),
    ]
    for b1, b2, matrix, truth in rows:
        inp = prenex_input(blocks(b1, b2), parse_formula(matrix))
        assert inp.truth() is truth
        enc = encode_forall_exists(inp)
        assert _decide(enc, inp) is truth


def test_fe_rejects_other_prefixes():
    with pytest.raises(SemanticError):
        encode_forall_exists(prenex_input(blocks((E, "x")), parse_formula("x")))
    inp3 = prenex_input(
        blocks((E, "z"), (A, "x"), (E, "y")), parse_formula("x <-> y")
    )
    with pytest.raises(SemanticError):
        encode_forall_exists(inp3)


# -------------------------------------------------------------- inf encoding


INF_ROWS = [
    (blocks((E, "p")), "p", True),
    (blocks((E, "p")), "p & ~p", False),
    (blocks((A, "q"), (E, "p")), "p <-> q", True),
    (blocks((A, "q"), (E, "p")), "p & q", False),
    (blocks((E, "r"), (A, "q"), (E, "p")), "(p <-> q) | r", True),
    (blocks((E, "r"), (A, "q"), (E, "p")), "r & ~r", False),
]


def test_inference_tower_decides():
    for bs, matrix, truth in INF_ROWS:
        inp = prenex_input(bs, parse_formula(matrix))
        assert inp.truth() is truth
        enc = encode_inference(inp)
        assert _decide(enc, inp) is truth


def test_inference_tower_depth_and_parity():
    for bs, matrix, _ in INF_ROWS:
        inp = prenex_input(bs, parse_formula(matrix))
        enc = encode_inference(inp)
        k = inp.n
        assert nat_depth(enc.theory) == max(k - 2, 0)
        assert enc.yes_iff_true == (k % 2 == 0)
        assert validate(enc.theory).ok()


def test_inference_close_params():
    # free z, forall-outermost written prefix: decide the universal closure
    inp = prenex_input(blocks((A, "q"), (E, "p")), parse_formula("p <-> (q & z)"))
    assert inp.params == ("z",)
    enc = encode_inference(inp, close_params=True)
    assert enc.closure == "forall"
    truth = inp.truth("forall")
    assert truth is True
    assert _decide(enc, inp) is truth
    # z described at the extra wrapper level, one deeper than the plain form
    assert nat_depth(enc.theory) == 1


def test_inference_close_params_errors():
    closed = prenex_input(blocks((A, "q"), (E, "p")), parse_formula("p <-> q"))
    with pytest.raises(SemanticError):
        encode_inference(closed, close_params=True)
    e_out = prenex_input(blocks((E, "p")), parse_formula("p | z"))
    with pytest.raises(SemanticError):
        encode_inference(e_out, close_params=True)


# --------------------------------------------------------------- mc encoding


MC_ROWS = [
    (blocks((E, "p")), "p", True),
    (blocks((E, "p")), "p & ~p", False),
    (blocks((A, "q"), (E, "p")), "p <-> q", True),
    (blocks((A, "q"), (E, "p")), "p & q", False),
    (blocks((E, "r"), (A, "q"), (E, "p")), "(p <-> q) | r", True),
    (blocks((E, "r"), (A, "q"), (E, "p")), "r & ~r", False),
]


def test_check_tower_decides_outer_empty():
    for bs, matrix, truth in MC_ROWS:
        inp = prenex_input(bs, parse_formula(matrix))
        enc = encode_model_checking(inp, outer_empty=True)
        assert enc.n == inp.n
        assert enc.theory.ab == (enc.ab,)  # no twins without an outer group
        assert _decide(enc, inp) is truth


def test_check_tower_decides_with_outer_group():
    for bs, matrix, truth in MC_ROWS:
        inp = prenex_input(bs, parse_formula(matrix))
        if inp.n < 2:
            continue
        enc = encode_model_checking(inp)
        assert enc.n == inp.n - 1
        assert len(enc.theory.ab) == 1 + 2 * len(inp.letters(inp.n))
        assert _decide(enc, inp) is truth


def test_check_tower_shapes():
    inp = prenex_input(blocks((A, "q"), (E, "p")), parse_formula("p <-> q"))
    enc = encode_model_checking(inp)
    assert enc.yes_iff_true == (enc.n % 2 == 0)
    assert enc.model == frozenset({"p", enc.v, enc.u})  # n odd keeps u on
    (top,) = enc.theory.blocks()
    # outer letters appear described at the top but in no inner block
    assert "q" in top.described
    kids = top.formula_children()
    # twin exclusivity is unconditional; only the transfer is guarded
    assert any(
        isinstance(k, Iff) and isinstance(k.right, Not) for k in kids
    ) or any(
        getattr(k, "args", None)
        and all(isinstance(x, Iff) for x in getattr(k, "args", ()))
        for k in kids
    )
    assert any(isinstance(k, Implies) and isinstance(k.left, Not) for k in kids)
    assert nat_depth(enc.theory) == max(enc.n - 1, 0)


def test_check_tower_rejects_open_inputs():
    inp = prenex_input(blocks((E, "p")), parse_formula("p | z"))
    with pytest.raises(SemanticError):
        encode_model_checking(inp)
    one = prenex_input(blocks((E, "p")), parse_formula("p"))
    with pytest.raises(SemanticError):
        encode_model_checking(one, outer_empty=False)


# ------------------------------------------------------------ xhorn encoding


XHORN_ROWS = [
    (blocks((E, "p")), "p", True),
    (blocks((E, "p")), "p & ~p", False),
    (blocks((A, "q"), (E, "p")), "(~p | q) & (p | ~q)", True),  # p <-> q as CNF
    (blocks((A, "q"), (E, "p")), "p & q", False),
]


def test_horn_tower_decides():
    for bs, matrix, truth in XHORN_ROWS:
        inp = prenex_input(bs, parse_formula(matrix))
        assert inp.truth() is truth
        enc = encode_horn_tower(inp)
        assert _decide(enc, inp) is truth


def test_horn_tower_is_syntactically_horn():
    for bs, matrix, _ in XHORN_ROWS:
        inp = prenex_input(bs, parse_formula(matrix))
        enc = encode_horn_tower(inp)
        r = validate(enc.theory)
        assert r.ok() and r.is_horn and r.uses_minmax
        assert enc.theory.ab == ()  # abnormalities come from lowering only
        assert nat_depth(enc.theory) == max(1, inp.n - 1)


def test_horn_tower_polarity_flip():
    # a positive matrix literal turns into its negated twin
    inp = prenex_input(blocks((E, "p")), parse_formula("p"))
    enc = encode_horn_tower(inp)
    ((orig, twin),) = enc.twins
    assert orig == "p"
    (top,) = enc.theory.blocks()
    guard = top.formula_children()[0]
    names = {a.arg.name if isinstance(a, Not) else a.name for a in guard.args}
    assert twin in names and "p" not in names


def test_horn_tower_exclusion_block():
    inp = prenex_input(blocks((E, "p q")), parse_formula("p | ~q"))
    enc = encode_horn_tower(inp)
    (top,) = enc.theory.blocks()
    (excl,) = top.block_children()
    # every letter and twin is maximized; the children forbid agreement,
    # so each pair must disagree: exactly the twin-exclusivity discipline
    flat = set(excl.max_letters)
    for x, x2 in enc.twins:
        assert x in flat and x2 in flat
    assert len(excl.formula_children()) == len(enc.twins)


def test_horn_tower_needs_cnf_matrix():
    inp = prenex_input(blocks((E, "p q")), parse_formula("p <-> q"))
    with pytest.raises(SemanticError):
        encode_horn_tower(inp)


# ----------------------------------------------------------------- manifests


def test_manifest_fields():
    inp = prenex_input(blocks((A, "q"), (E, "p")), parse_formula("p <-> q"))
    enc = encode_inference(inp)
    m = manifest(enc, inp, "inf-000")
    assert list(m)[:4] == ["id", "kind", "prefix_blocks", "truth"]
    assert m["id"] == "inf-000" and m["kind"] == "inf"
    assert m["truth"] is True and m["entailed"] is True
    assert m["ab"] == 1 and m["depth"] == 0

    mc = encode_model_checking(inp)
    mm = manifest(mc, inp, "mc-000")
    assert mm["kind"] == "mc" and "model" in mm
    assert mm["check"] is (True == mc.yes_iff_true)
