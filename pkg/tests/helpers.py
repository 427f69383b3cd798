"""Shared random generators and small oracles for the test suites.

Every generator takes its Random instance from the caller so each suite can
pin its own seed; the randomized suites freeze (seed, count) pairs that have
been run to completion against the brute-force oracles.
"""

from __future__ import annotations

import random

from nestcirc.clauses import Clause, clause_formula
from nestcirc.formulas import (
    FALSE,
    TRUE,
    And,
    Atom,
    Circ,
    Exists,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    atoms as formula_atoms,
    conj,
    disj,
)
from nestcirc.theory import Block, Nat, occurring_letters, unstable_fixed_letters


# ---------------------------------------------------------------------------
# propositional and circumscribed formulas


def rand_prop(rng: random.Random, pool, depth, consts=False):
    if depth == 0 or rng.random() < 0.3:
        if consts and rng.random() >= 0.9:
            return TRUE if rng.random() < 0.5 else FALSE
        a = Atom(rng.choice(pool))
        return Not(a) if rng.random() < 0.4 else a
    op = rng.choice(["and", "or", "imp", "not"])
    if op == "not":
        return Not(rand_prop(rng, pool, depth - 1, consts))
    left = rand_prop(rng, pool, depth - 1, consts)
    right = rand_prop(rng, pool, depth - 1, consts)
    if op == "and":
        return And((left, right))
    if op == "or":
        return Or((left, right))
    return Implies(left, right)


def rand_prop_full(rng: random.Random, pool, depth):
    """Like rand_prop but with iff and occasional constants; any polarity."""
    if depth == 0 or rng.random() < 0.3:
        r = rng.random()
        if r >= 0.9:
            return TRUE if rng.random() < 0.5 else FALSE
        return Atom(rng.choice(pool))
    op = rng.choice(["not", "and", "or", "imp", "iff"])
    if op == "not":
        return Not(rand_prop_full(rng, pool, depth - 1))
    left = rand_prop_full(rng, pool, depth - 1)
    right = rand_prop_full(rng, pool, depth - 1)
    if op == "and":
        return And((left, right))
    if op == "or":
        return Or((left, right))
    if op == "imp":
        return Implies(left, right)
    return Iff(left, right)


def rand_circ_nested(rng: random.Random, pool, depth, nd):
    """Circumscriptions anywhere a positive context allows them."""
    if nd == 0:
        return rand_prop_full(rng, pool, depth)
    if rng.random() < 0.45:
        body = rand_circ_nested(rng, pool, depth - 1, nd - 1) if depth else rand_prop_full(rng, pool, 0)
        picks = [a for a in pool if rng.random() < 0.5]
        rng.shuffle(picks)
        k = rng.randrange(0, len(picks) + 1)
        return Circ(body, tuple(sorted(picks[:k])), tuple(sorted(picks[k:])))
    if depth == 0:
        return rand_prop_full(rng, pool, 0)
    op = rng.choice(["not", "and", "or", "imp"])
    if op == "not":
        return Not(rand_circ_nested(rng, pool, depth - 1, nd))
    left = rand_circ_nested(rng, pool, depth - 1, nd)
    right = rand_circ_nested(rng, pool, depth - 1, nd)
    if op == "and":
        return And((left, right))
    if op == "or":
        return Or((left, right))
    return Implies(left, right)


def rand_circ_tower(rng: random.Random, pool, depth):
    """A positive-position circumscription chain, optionally conjoined with a
    side formula; every list nonempty so fixed-letter elimination has work."""
    if depth == 0 or rng.random() < 0.5:
        body = rand_prop(rng, pool, depth)
    else:
        body = rand_circ_tower(rng, pool, depth - 1)
    picks = rng.sample(pool, k=rng.randint(1, len(pool)))
    k = rng.randint(1, len(picks))
    out = Circ(body, tuple(picks[:k]), tuple(picks[k:]))
    if rng.random() < 0.5:
        out = And((out, rand_prop(rng, pool, 1)))
    return out


# ---------------------------------------------------------------------------
# Horn clauses and abnormality theories


def rand_clause(rng: random.Random, pool):
    body = rng.sample(pool, k=rng.randint(0, min(2, len(pool))))
    head = rng.choice(list(pool) + [None, None])
    pos = (head,) if head else ()
    return clause_formula(Clause(pos, tuple(body)))


def rand_horn_block(rng: random.Random, letters, ab, depth, nest_p=0.4):
    described = tuple(sorted(rng.sample(letters, k=rng.randint(0, len(letters)))))
    kids = []
    pool = list(letters) + list(ab)
    for _ in range(rng.randint(1, 3)):
        if depth > 0 and rng.random() < nest_p:
            kids.append(rand_horn_block(rng, letters, ab, depth - 1, nest_p))
        else:
            kids.append(rand_clause(rng, pool))
    return Block(described, tuple(kids))


def rand_horn_nat(rng: random.Random, letters=("p", "q", "r"), stable_only=True):
    """Horn theories, fixed letters allowed; ``stable_only`` redraws until no
    fixed letter of any block is described by an enclosing block."""
    letters = list(letters)
    ab = ("ab1",) if rng.random() < 0.7 else ("ab1", "ab2")
    while True:
        items = [
            rand_horn_block(rng, letters, ab, rng.randint(0, 2))
            for _ in range(rng.randint(1, 2))
        ]
        if rng.random() < 0.4:
            items.append(rand_clause(rng, letters))
        t = Nat(ab, tuple(items))
        if stable_only and unstable_fixed_letters(t):
            continue
        return t


def rand_nofixed_block(rng: random.Random, ab, letters, depth):
    """Blocks describing exactly their occurring non-Ab letters."""
    kids = [rand_clause(rng, list(ab) + list(letters)) for _ in range(rng.randrange(1, 4))]
    if depth > 0 and rng.random() < 0.55:
        kids.append(rand_nofixed_block(rng, ab, letters, depth - 1))
    rng.shuffle(kids)
    occ = occurring_letters(Block((), tuple(kids)))
    described = tuple(sorted(a for a in occ if a not in ab))
    return Block(described, tuple(kids))


def rand_nofixed_nat(rng: random.Random):
    ab = tuple(f"ab{i + 1}" for i in range(rng.choice([1, 1, 2])))
    letters = ["p", "q", "r"][: rng.choice([2, 3, 3])]
    items = [rand_nofixed_block(rng, ab, letters, rng.choice([0, 1, 1, 2]))]
    if rng.random() < 0.4:
        items.append(rand_nofixed_block(rng, ab, letters, 0))
    return Nat(ab, tuple(items))


def rand_general_block(rng: random.Random, ab, free, depth):
    described = tuple(sorted(a for a in free if rng.random() < 0.5))
    kids = [rand_prop_full(rng, list(ab) + list(free), 2) for _ in range(rng.randrange(1, 3))]
    if depth > 0 and rng.random() < 0.5:
        kids.append(rand_general_block(rng, ab, free, depth - 1))
    rng.shuffle(kids)
    return Block(described, tuple(kids))


def rand_general_nat(rng: random.Random, max_depth):
    n_ab = rng.choice([1, 1, 2])
    ab = tuple(f"ab{i + 1}" for i in range(n_ab))
    free = ["p", "q", "r"][: rng.choice([2, 2, 3])]
    items = [rand_general_block(rng, ab, free, max_depth - 1)]
    if rng.random() < 0.3:
        items.append(rand_prop_full(rng, free, 2))
    return Nat(ab, tuple(items))


def rand_ext_block(rng: random.Random, letters, ab):
    """Depth-0 extended blocks: letters split into described/min/max."""
    picks = rng.sample(letters, k=rng.randint(0, len(letters)))
    k1 = rng.randint(0, len(picks))
    k2 = rng.randint(k1, len(picks))
    described = tuple(sorted(picks[:k1]))
    mins = tuple(sorted(picks[k1:k2]))
    maxs = tuple(sorted(picks[k2:]))
    pool = list(letters) + list(ab)
    kids = tuple(rand_clause(rng, pool) for _ in range(rng.randint(1, 3)))
    return Block(described, kids, mins, maxs)


# ---------------------------------------------------------------------------
# prenex inputs and closed quantified formulas


def rand_prenex(rng: random.Random, names, max_blocks=3, max_vars=5):
    """Alternating prefix with an existential innermost block."""
    nb = rng.randint(1, max_blocks)
    nv = rng.randint(nb, max_vars)
    pool = list(names[:nv])
    cuts = sorted(rng.sample(range(1, nv), nb - 1)) if nb > 1 else []
    groups, lo = [], 0
    for c in cuts + [nv]:
        groups.append(tuple(pool[lo:c]))
        lo = c
    kinds = []
    k = "e" if nb % 2 == 1 else "a"
    for _ in range(nb):
        kinds.append(k)
        k = "a" if k == "e" else "e"
    blocks = tuple((kinds[i], groups[i]) for i in range(nb))
    matrix = rand_iff_prop(rng, pool, rng.randint(1, 3))
    return blocks, matrix


def rand_iff_prop(rng: random.Random, pool, depth):
    if depth == 0 or rng.random() < 0.3:
        a = Atom(rng.choice(pool))
        return Not(a) if rng.random() < 0.4 else a
    k = rng.choice(["and", "or", "not", "imp", "iff"])
    if k == "not":
        return Not(rand_iff_prop(rng, pool, depth - 1))
    f, g = rand_iff_prop(rng, pool, depth - 1), rand_iff_prop(rng, pool, depth - 1)
    if k == "and":
        return conj([f, g])
    if k == "or":
        return disj([f, g])
    if k == "imp":
        return Implies(f, g)
    return Iff(f, g)


def rand_closed_qbf(rng: random.Random, pool, depth):
    """A closed quantified formula: quantifiers appear at random positions
    and whatever stays free is bound by one outer block at the end."""

    def go(d):
        roll = rng.random()
        if d == 0 or roll < 0.3:
            a = Atom(rng.choice(pool))
            return Not(a) if rng.random() < 0.4 else a
        kind = rng.choice(["and", "or", "not", "imp", "iff", "q"])
        if kind == "not":
            return Not(go(d - 1))
        if kind == "q":
            body = go(d - 1)
            inner = sorted(formula_atoms(body))
            if not inner:
                return body
            picks = tuple(rng.sample(inner, min(len(inner), rng.randint(1, 2))))
            return (Exists if rng.random() < 0.5 else Forall)(picks, body)
        f, g = go(d - 1), go(d - 1)
        if kind == "and":
            return conj([f, g])
        if kind == "or":
            return disj([f, g])
        if kind == "imp":
            return Implies(f, g)
        return Iff(f, g)

    body = go(depth)
    free = sorted(formula_atoms(body))
    if not free:
        return body
    return (Exists if rng.random() < 0.5 else Forall)(tuple(free), body)


# shared letter pools
LETTERS = ("p", "q", "r", "s", "t2", "w", "k", "m", "n2", "j")
