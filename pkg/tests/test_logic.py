import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from matroid_ms0.errors import BudgetExceeded, FormationError, InputError, ParseError
from matroid_ms0.logic import (
    And, Exists, Forall, Fresh, Ind, Not, Sing, StackedMatroid, Subseteq, axiom_sentences, conj, estimate_cost,
    evaluate, evaluate_vectorized, is_prenex, minor_sentence, normalize_prenex, parse, public_names,
    random_prenex_sentence, relabel, rename_apart, satisfies_stacked, to_prenex, to_text, truth_table,
)
from matroid_ms0.logic.formula import size
from matroid_ms0.matroid import SetSystem, all_matroids, gen_pg2, gen_uniform, has_minor, is_matroid, popcount

SMALL = [M for n in range(4) for M in all_matroids(n)]


def reference(S, f, env):
    """Textbook semantics, one subset at a time."""
    if isinstance(f, Ind):
        return S.indep_mask(env[f.name])
    if isinstance(f, Sing):
        return popcount(env[f.name]) == 1
    if isinstance(f, Subseteq):
        return env[f.left] & ~env[f.right] == 0
    if isinstance(f, Not):
        return not reference(S, f.body, env)
    if isinstance(f, And):
        return reference(S, f.left, env) and reference(S, f.right, env)
    vals = (reference(S, f.body, {**env, f.name: m}) for m in range(1 << S.n))
    return any(vals) if isinstance(f, Exists) else all(vals)


def random_formula(rng, names, depth):
    """Random formula with quantifiers anywhere; free variables drawn from ``names``."""
    if depth == 0 or rng.random() < 0.2:
        k = rng.randrange(3)
        if k == 0:
            return Ind(rng.choice(names))
        if k == 1:
            return Sing(rng.choice(names))
        return Subseteq(rng.choice(names), rng.choice(names))
    r = rng.random()
    if r < 0.2:
        return Not(random_formula(rng, names, depth - 1))
    if r < 0.55:
        return conj(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))
    body = random_formula(rng, names, depth - 1)
    if not body.fr:
        return body
    v = rng.choice(sorted(body.fr))
    return (Exists if rng.random() < 0.5 else Forall)(v, body)


def random_sentence(rng, depth=4):
    f = random_formula(rng, ["A", "B", "C"], depth)
    for v in sorted(f.fr):
        f = (Exists if rng.random() < 0.5 else Forall)(v, f)
    return f


seeds = st.integers(0, 10**9)
small_matroids = st.sampled_from(SMALL)


# parsing


def test_parse_core_atoms():
    assert parse("Ind(X)") == Ind("X")
    assert parse("Sing(X)") == Sing("X")
    assert parse("A <= B") == Subseteq("A", "B")
    assert parse("!Ind(X)") == Not(Ind("X"))
    assert parse("exists X. Ind(X)") == Exists("X", Ind("X"))


def test_connective_precedence():
    f = parse("Ind(A) & Sing(A) | Sing(B)")
    g = parse("(Ind(A) & Sing(A)) | Sing(B)")
    assert f == g
    # implication is right associative
    assert parse("Ind(A) -> Ind(B) -> Ind(C)") == parse("Ind(A) -> (Ind(B) -> Ind(C))")


def test_quantifier_scopes_right():
    assert parse("Ind(A) & exists X. X <= A & Sing(X)") == parse("Ind(A) & (exists X. (X <= A & Sing(X)))")


@pytest.mark.parametrize("text,pos", [
    ("Ind(X", 5), ("Ind(X) &", 8), ("exists . Ind(X)", 7), ("A <= ", 5), ("Ind(X) $", 7), ("Ind(_U1)", 4),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == pos
    assert f"at position {pos}" in str(info.value)


def test_formation_errors():
    with pytest.raises(FormationError) as info:
        Exists("Y", Ind("X"))
    assert info.value.variable == "Y"
    with pytest.raises(FormationError):
        And(Ind("X"), Exists("X", Sing("X")))
    with pytest.raises(FormationError):
        parse("exists Y. Ind(X)")
    with pytest.raises(FormationError):
        parse("Ind(X) & exists X. Sing(X)", strict=True)
    # without strict the clash is repaired by renaming the bound copy
    f = parse("Ind(X) & exists X. Sing(X)")
    assert f.fr == {"X"} and len(f.var) == 2


def test_free_and_bound_sets():
    f = parse("exists X. X <= Y & Ind(X)")
    assert f.fr == {"Y"} and f.bound == {"X"} and f.var == {"X", "Y"}


def test_sugar_counts_fresh_variables():
    m = parse("Max(X)")
    assert m.fr == {"X"} and len(m.bound) == 3
    u = parse("Union(A, B; C)")
    assert u.fr == {"A", "B", "C"} and len(u.bound) == 1


@given(seeds)
def test_text_round_trip(seed):
    f = random_sentence(random.Random(seed))
    assert parse(to_text(public_names(f))) == public_names(f)


def test_public_names_avoid_clashes():
    f = parse("exists X1. Max(X1)")
    g = public_names(f)
    assert not any(v.startswith("_") for v in g.var) and len(g.var) == len(f.var)


def test_relabel_must_be_injective():
    with pytest.raises(InputError):
        relabel(parse("A <= B"), {"A": "B"})


# semantics on hand examples


def test_hand_truths():
    U24 = gen_uniform(2, 4)
    three = parse("exists X. Ind(X) & exists A. exists B. exists C. Sing(A) & Sing(B) & Sing(C) "
                  "& A <= X & B <= X & C <= X & !(A <= B) & !(B <= C) & !(A <= C)")
    assert not evaluate(U24, three)
    assert evaluate(gen_uniform(3, 4), three)
    assert evaluate(U24, parse("forall X. Sing(X) -> Ind(X)"))
    assert not evaluate(gen_uniform(0, 2), parse("exists X. Sing(X) & Ind(X)"))
    assert evaluate(U24, parse("Max(B)"), {"B": ["e1", "e2"]})
    assert not evaluate(U24, parse("Max(B)"), {"B": ["e1"]})
    assert evaluate(U24, parse("Union(A, B; C)"), {"A": ["e1"], "B": ["e2"], "C": ["e1", "e2"]})
    assert not evaluate(U24, parse("Union(A, B; C)"), {"A": ["e1"], "B": ["e2"], "C": ["e1"]})


def test_missing_assignment_rejected():
    with pytest.raises(InputError):
        evaluate(gen_uniform(1, 2), parse("Ind(X)"))


def test_budget_refusal():
    P = gen_pg2(3)
    f = axiom_sentences()[2]
    est = estimate_cost(f, P.n)
    with pytest.raises(BudgetExceeded) as info:
        evaluate(P, f, budget=est - 1)
    assert info.value.estimate == est and info.value.budget == est - 1


def test_axioms_on_all_three_element_families():
    i1, i2, i3 = axiom_sentences()
    labels = ["a", "b", "c"]
    for code in range(256):
        fam = [m for m in range(8) if code >> m & 1]
        S = SetSystem(labels, [[labels[i] for i in range(3) if m >> i & 1] for m in fam])
        got = evaluate(S, i1) and evaluate(S, i2) and evaluate(S, i3)
        assert got == is_matroid(3, fam)


def test_minor_sentence_small():
    N = gen_uniform(1, 2)
    f = minor_sentence(N)
    for M in SMALL:
        assert evaluate(M, f) == has_minor(M, N)


def test_stacked_matroid_reading():
    U = gen_uniform(1, 3)
    sm = StackedMatroid(U, (0b011,))
    assert not satisfies_stacked(sm, parse("Ind(X1)"))
    assert satisfies_stacked(sm.push(0b001), parse("X2 <= X1 & Ind(X2)"))
    with pytest.raises(InputError):
        satisfies_stacked(sm, parse("Ind(X2)"))
    with pytest.raises(InputError):
        StackedMatroid(U, (0b1000,))


# engines agree


@given(small_matroids, seeds)
def test_engines_agree_with_reference(M, seed):
    f = random_sentence(random.Random(seed))
    want = reference(M, f, {})
    assert evaluate(M, f) == want
    assert evaluate(M, f, fast=False) == want
    assert evaluate_vectorized(M, f) == want


@given(small_matroids, seeds)
def test_truth_table_matches_reference(M, seed):
    f = random_formula(random.Random(seed), ["A", "B"], 3)
    order = sorted(f.var)
    T = truth_table(M, f, order)
    free = [v for v in order if v in f.fr]
    assert T.shape == tuple(1 << M.n for _ in free)
    for idx in np.ndindex(*T.shape):
        assert T[idx] == reference(M, f, dict(zip(free, idx)))


# prenex


@given(small_matroids, seeds)
def test_prenex_preserves_truth(M, seed):
    f = random_sentence(random.Random(seed))
    p = to_prenex(f)
    assert is_prenex(p)
    assert reference(M, p, {}) == reference(M, f, {})
    n = normalize_prenex(p)
    assert reference(M, n, {}) == reference(M, f, {})


@given(seeds)
def test_prenex_adds_variables_only_when_renaming(seed):
    f = random_sentence(random.Random(seed))
    p = to_prenex(f)
    assert to_prenex(p) == p
    distinct_binders = len(rename_apart(f).var)
    assert len(p.var) == distinct_binders and size(p) >= 1


def test_prenex_of_shared_binder_name():
    f = parse("(exists X. Ind(X)) & (exists X. Sing(X))")
    p = to_prenex(f)
    assert is_prenex(p) and len(p.var) == 2


@given(seeds)
def test_random_prenex_sentence_shape(seed):
    f = random_prenex_sentence(random.Random(seed), 2)
    assert is_prenex(f) and not f.fr and f.var == {"X1", "X2"}
