import pytest
from hypothesis import given, strategies as st

from matroid_ms0.errors import InputError
from matroid_ms0.field import matrix_rank
from matroid_ms0.gain import (
    Edge, GainGraph, GainGroup, all_cycles, build_delta, build_gamma, cycle_gain, frame_circuits,
    glue_hoop_loop, incidence_matrix, is_balanced,
)
from matroid_ms0.matroid import MatrixMatroid, bits, is_matroid, matroids_equal, popcount

Z5 = GainGroup.cyclic(5)


def _frame_rank(G, mask):
    """|V(X)| minus the number of balanced components, via potentials."""
    edges = [G.edges[i] for i in bits(mask)]
    verts = {w for e in edges for w in (e.u, e.v)}
    adj = {w: [] for w in verts}
    for e in edges:
        adj[e.u].append((e.v, e.gain))
        if e.u != e.v:
            adj[e.v].append((e.u, -e.gain))
        else:
            adj[e.u].append((e.u, -e.gain))
    pot, balanced_components = {}, 0
    for root in verts:
        if root in pot:
            continue
        pot[root] = 0
        stack, ok = [root], True
        while stack:
            w = stack.pop()
            for x, g in adj[w]:
                want = (pot[w] + g) % G.group.order
                if x not in pot:
                    pot[x] = want
                    stack.append(x)
                elif pot[x] != want:
                    ok = False
        balanced_components += ok
    return len(verts) - balanced_components


def test_groups():
    U = GainGroup.field_units(17, 3)
    assert U.order == 16 and U.field_value(1) == 3 and U.field_value(16) == 1
    assert U.element_order(2) == 8
    with pytest.raises(InputError):
        GainGroup.field_units(17, 2)     # 2 has order 8
    with pytest.raises(InputError):
        GainGroup.cyclic(0)


def test_balanced_triangle_is_graphic():
    G = GainGraph(["u", "v", "w"], [Edge("p", "u", "v", 0), Edge("q", "v", "w", 0), Edge("r", "w", "u", 0)], Z5)
    M = G.frame_matroid()
    assert M.rank() == 2 and M.circuits() == [("p", "q", "r")]
    assert is_balanced(G, ["p", "q", "r"])


def test_unbalanced_triangle_is_independent():
    G = GainGraph(["u", "v", "w"], [Edge("p", "u", "v", 1), Edge("q", "v", "w", 0), Edge("r", "w", "u", 0)], Z5)
    assert G.frame_matroid().rank() == 3
    assert cycle_gain(G, ["p", "q", "r"]) % 5 in (1, 4)


def test_loops_and_parallel_pairs():
    G = GainGraph(["u", "v"], [Edge("z", "u", "u", 0), Edge("h", "u", "u", 2),
                               Edge("p", "u", "v", 1), Edge("q", "u", "v", 1), Edge("r", "u", "v", 3)], Z5)
    M = G.frame_matroid()
    assert not M.is_independent(["z"])           # balanced loop
    assert M.is_independent(["h"])               # unbalanced loop
    assert not M.is_independent(["p", "q"])      # equal gains: balanced digon
    assert M.is_independent(["p", "r"])          # unequal gains
    # two unbalanced cycles joined at a vertex form a circuit in rank 2
    assert not M.is_independent(["h", "p", "r"])


def test_reversal_negates_gain():
    a = GainGraph(["u", "v"], [Edge("p", "u", "v", 2), Edge("q", "v", "u", 3)], Z5)
    assert is_balanced(a, ["p", "q"])


def test_shape_of_hoop_and_loop():
    U = GainGroup.field_units(17, 3)
    G, D = build_gamma(3, U), build_delta(3, U)
    assert len(G.edges) == 13 and len(G.vertices) == 4
    assert len(D.edges) == 20 and len(D.vertices) == 6
    H = glue_hoop_loop(G, D)
    assert len(H.edges) == 28 and len(H.vertices) == 8
    assert G.frame_matroid().rank() == 4 and D.frame_matroid().rank() == 6
    assert H.frame_matroid().rank() == 8
    assert set(G.edge_ids) & set(D.edge_ids) == {"a", "b", "x", "y", "z"}


def test_order_requirements_enforced():
    with pytest.raises(InputError):
        build_delta(3, GainGroup.field_units(13))   # 12 units, needs order > 12
    with pytest.raises(InputError):
        build_gamma(2, GainGroup.field_units(17, 3))


def test_glue_rejects_mismatch():
    U = GainGroup.field_units(17, 3)
    G = build_gamma(3, U)
    with pytest.raises(InputError):
        glue_hoop_loop(G, build_delta(3, GainGroup.field_units(19)))


def test_incidence_matrix_represents_hoop():
    G = build_gamma(3, GainGroup.field_units(17, 3))
    A = incidence_matrix(G)
    assert A.shape == (4, 13) and matrix_rank(A) == 4
    assert matroids_equal(MatrixMatroid(A), G.frame_matroid())


def test_circuit_listing_matches_oracle():
    G = build_gamma(3, GainGroup.cyclic(7))
    M = G.frame_matroid()
    got = sorted(tuple(sorted(c)) for c in frame_circuits(G))
    want = sorted(tuple(sorted(c)) for c in M.circuits())
    assert got == want


@st.composite
def gain_graphs(draw, order=7, unit_field=None):
    nv = draw(st.integers(1, 4))
    verts = [f"v{i}" for i in range(nv)]
    ne = draw(st.integers(0, 7))
    edges = []
    for i in range(ne):
        u = draw(st.sampled_from(verts))
        w = draw(st.sampled_from(verts))
        edges.append(Edge(f"e{i}", u, w, draw(st.integers(0, order - 1))))
    group = GainGroup.field_units(unit_field) if unit_field else GainGroup.cyclic(order)
    return GainGraph(verts, edges, group)


@given(gain_graphs())
def test_frame_rank_formula(G):
    M = G.frame_matroid()
    for mask in range(1 << len(G.edges)):
        assert M.rank_mask(mask) == _frame_rank(G, mask)


@given(gain_graphs())
def test_frame_matroid_axioms(G):
    M = G.frame_matroid()
    assert is_matroid(M.n, M.independent_masks())


@given(gain_graphs(order=10, unit_field=11))
def test_incidence_matrix_matches_frame(G):
    assert matroids_equal(MatrixMatroid(incidence_matrix(G)), G.frame_matroid())


@given(gain_graphs())
def test_cycles_are_dependent_exactly_when_balanced(G):
    M = G.frame_matroid()
    for C in all_cycles(G):
        ids = frozenset(G.edges[i].id for i in bits(C))
        assert M.indep_mask(C) == (not is_balanced(G, ids))


def test_walk_and_set_forms_agree():
    G = build_gamma(3, GainGroup.cyclic(17))
    walk = ["x1", "x2", "x3", "z"]
    # z runs u1 -> u4 with exponent 3 and is traversed backwards here
    assert cycle_gain(G, walk) == 14
    assert cycle_gain(G, frozenset(walk)) in (3, 14)
    assert cycle_gain(G, frozenset(["x1", "x2", "x3", "x"])) == 0
    with pytest.raises(InputError):
        cycle_gain(G, frozenset(["x1", "x2"]))
