"""Worked example values for each module, computed independently where noted."""

import itertools

import pytest

from matroid_ms0.alcove import alcove_constraints, alcove_solve
from matroid_ms0.amalgam import AmalgamMatroid, AmalgamSpec, rank_superset_min
from matroid_ms0.field import FFMatrix, PrimeField, element_order, find_generator, matrix_rank
from matroid_ms0.gain import (
    Edge, GainGraph, GainGroup, build_delta, build_gamma, frame_circuits, glue_hoop_loop, incidence_matrix,
    is_balanced,
)
from matroid_ms0.logic import evaluate, minor_sentence, parse
from matroid_ms0.matroid import (
    CircuitsMatroid, MatrixMatroid, direct_sum, free_matroid, gen_pg2, gen_uniform, has_minor,
    is_isomorphic_small, is_matroid, matroids_equal,
)

U17 = GainGroup.field_units(17, 3)


def test_field_values():
    assert element_order(PrimeField(17), 1) == 1
    assert element_order(PrimeField(29), 2) == 28
    assert [find_generator(PrimeField(p)) for p in (2, 17, 29)] == [1, 3, 2]
    for p in (2, 3, 5, 7, 97):
        F = PrimeField(p)
        assert all((p - 1) % element_order(F, a) == 0 for a in range(1, p))


def test_repeated_column_is_a_two_circuit():
    M = MatrixMatroid(FFMatrix(5, ((1, 1, 0), (2, 2, 1)), col_labels=("a", "b", "c")))
    assert M.circuits() == [("a", "b")]


def test_matroid_values():
    F = gen_pg2(2)
    line = [C for C in F.circuits() if len(C) == 3][0]
    assert not F.is_independent(line) and F.is_independent(line[:2])
    assert F.closure(line[:2]) == line
    assert gen_uniform(2, 4).closure(["e1"]) == ("e1",)
    assert direct_sum(gen_uniform(1, 1), CircuitsMatroid(["f"], [])).circuits() == []
    assert matroids_equal(gen_uniform(2, 4).delete(["e4"]), gen_uniform(2, 3))
    assert is_isomorphic_small(gen_uniform(2, 4).contract(["e1"]), gen_uniform(1, 3))
    assert is_matroid(["e"], [[]]) and not is_matroid(["e"], [["e"]])
    assert has_minor(gen_uniform(2, 4), gen_uniform(2, 4))
    assert not has_minor(gen_uniform(2, 3), gen_uniform(2, 4))
    assert gen_uniform(0, 0).n == 0 and gen_uniform(0, 0).rank() == 0


def test_hoop_cycles():
    G = build_gamma(3, U17)
    assert is_balanced(G, frozenset(["x1", "x2", "x3", "x"]))
    assert is_balanced(G, frozenset(["y1", "y2", "y3", "z"]))
    assert not is_balanced(G, frozenset(["x1", "y1"]))
    assert not is_balanced(G, frozenset(["y1", "y2", "y3", "x"]))
    M = G.frame_matroid()
    assert M.is_independent(["a", "a2", "a3", "b"])
    assert ("x", "x1", "x2", "x3") in [tuple(sorted(c)) for c in M.circuits()]


def test_loop_gains():
    D = build_delta(3, U17)
    assert D.edge("g").gain == 6
    f_gains = [D.edge(f"f{i}").gain for i in range(1, 6)]
    assert f_gains.count(2) == 3 and f_gains.count(3) == 2


def test_line_is_u25_on_both_sides():
    G, D = build_gamma(3, U17).frame_matroid(), build_delta(3, U17).frame_matroid()
    for M in (G, D):
        R = M.restrict(["a", "b", "x", "y", "z"])
        assert matroids_equal(R, CircuitsMatroid(list(R.ground), [list(c) for c in itertools.combinations(R.ground, 3)]))


def test_simple_for_valid_orders():
    U29 = GainGroup.field_units(29)
    for G in (build_gamma(3, U17), build_delta(3, U17), build_gamma(3, U29), build_delta(4, U29)):
        assert G.frame_matroid().is_simple()


def test_loop_column_shapes_and_handcuff():
    G = GainGraph(["u", "v"], [Edge("z", "u", "u", 0), Edge("h", "v", "v", 1), Edge("k", "v", "v", 2)], U17)
    A = incidence_matrix(G)
    assert A.column(0) == (0, 0) and A.column(1) == (0, 1)
    assert sorted(tuple(sorted(c)) for c in frame_circuits(G)) == [("h", "k"), ("z",)]
    one = GainGraph(["u"], [Edge("h", "u", "u", 1)], U17)
    assert frame_circuits(one) == []
    trivial = GainGraph(["u", "v"], [Edge("p", "u", "v", 0), Edge("q", "u", "v", 5)], GainGroup.cyclic(1))
    assert is_balanced(trivial, frozenset(["p", "q"]))


def test_incidence_of_hoop_has_rank_four():
    assert matrix_rank(incidence_matrix(build_gamma(3, U17))) == 4


def test_glued_graph_shape_and_restriction():
    G, D = build_gamma(3, U17), build_delta(3, U17)
    H = glue_hoop_loop(G, D)
    # (s + 1) + 2t - 2 vertices
    assert len(H.vertices) == 8 and len(H.edges) == 28
    MH = H.frame_matroid()
    assert matroids_equal(MH.restrict(list(G.edge_ids)), G.frame_matroid())
    spec = AmalgamSpec(G.frame_matroid(), D.frame_matroid())
    assert AmalgamMatroid(spec).rank() == 8 == MH.rank()


def test_small_amalgam_ranks():
    m1 = CircuitsMatroid(["p", "q", "c"], [["p", "q", "c"]])
    m2 = CircuitsMatroid(["p", "q", "d"], [["p", "q", "d"]])
    spec = AmalgamSpec(m1, m2)
    assert rank_superset_min(spec, []) == 0
    assert rank_superset_min(spec, ["c", "d"]) == 2
    assert rank_superset_min(spec, list(spec.elements)) == 2
    A = AmalgamMatroid(spec)
    assert matroids_equal(A.restrict(["p", "q", "c"]), m1)


def test_loops_form_a_basis_for_three_four():
    U29 = GainGroup.field_units(29)
    G, D = build_gamma(3, U29), build_delta(4, U29)
    A = AmalgamMatroid(AmalgamSpec(G.frame_matroid(), D.frame_matroid()))
    B = ["a", "a2", "a3", "b"] + [f"b{i}" for i in range(2, 8)]
    assert len(B) == 10 and A.is_independent(B) and A.rank() == 10


def test_alcove_regressions():
    assert alcove_solve(alcove_constraints(3, 3).without_disequations(), 7).sat
    # the disequations only forbid orders 1 and 2 for alpha1, so modulus 12 is solvable
    assert alcove_solve(alcove_constraints(3, 3), 12).sat
    assert not alcove_solve(alcove_constraints(3, 3), 2).sat
    for s in (3, 4):
        sys = alcove_constraints(s, s)
        assert all(alcove_solve(sys, n).sat for n in range(2 * s * (s - 1) + 1, 101))
    for s, t in itertools.permutations((3, 4, 5), 2):
        sys = alcove_constraints(s, t)
        assert not alcove_solve(sys, None).sat
        assert not any(alcove_solve(sys, n).sat for n in range(1, 61))


def test_logic_values():
    assert evaluate(free_matroid([]), parse("forall X1. Sing(X1) -> Ind(X1)"))
    assert evaluate(free_matroid(["e"]), parse("exists X1. Ind(X1)"))
    assert evaluate(gen_uniform(0, 0), minor_sentence(gen_uniform(0, 0)))
    N = gen_uniform(1, 2)
    assert evaluate(N, minor_sentence(N))
