import random

import pytest
from hypothesis import given, strategies as st

from matroid_ms0.amalgam import AmalgamSpec, amalgam_matroid, jackal_is_dependent, random_spec, rank_superset_min, rank_superset_min_table
from matroid_ms0.errors import InputError
from matroid_ms0.field import FFMatrix
from matroid_ms0.matroid import CircuitsMatroid, MatrixMatroid, gen_uniform, is_matroid, matroids_equal, popcount


def _cols(p, vectors, labels):
    rows = tuple(tuple(v[i] for v in vectors) for i in range(len(vectors[0])))
    return MatrixMatroid(FFMatrix(p, rows, col_labels=tuple(labels)))


LINE = [(1, 0), (0, 1), (1, 1)]
FANO_REST = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]


def _fano(tag):
    return _cols(2, [v + (0,) for v in LINE] + FANO_REST, ["l1", "l2", "l3"] + [f"{tag}{i}" for i in range(1, 5)])


def test_two_fanos_give_parallel_connection():
    A = amalgam_matroid(_fano("c"), _fano("d"))
    assert A.n == 11 and A.rank() == 4
    # glue in GF(2)^4: first Fano in coordinates 1,2,3 and second in 1,2,4
    vecs = [v + (0, 0) for v in LINE]
    vecs += [v + (0,) for v in FANO_REST]
    vecs += [v[:2] + (0, v[2]) for v in FANO_REST]
    assert matroids_equal(A, _cols(2, vecs, A.ground))


def test_rank_two_sides_give_uniform():
    m1 = CircuitsMatroid(["l1", "l2", "c1", "c2"], [[*s] for s in (("l1", "l2", "c1"), ("l1", "l2", "c2"),
                                                                   ("l1", "c1", "c2"), ("l2", "c1", "c2"))])
    m2 = CircuitsMatroid(["l1", "l2", "d1"], [["l1", "l2", "d1"]])
    A = amalgam_matroid(m1, m2)
    U = gen_uniform(2, 5)
    assert all(A.indep_mask(m) == U.indep_mask(m) for m in range(32))


def test_free_sides_give_free_amalgam():
    A = amalgam_matroid(CircuitsMatroid(["l1", "l2", "c"], []), CircuitsMatroid(["l1", "l2", "d"], []))
    assert A.rank() == 4 and A.is_independent(list(A.ground))


def test_spec_validation():
    with pytest.raises(InputError):   # line of a single point
        AmalgamSpec(CircuitsMatroid(["l1", "c"], []), CircuitsMatroid(["l1", "d"], []))
    with pytest.raises(InputError):   # shared set of rank 3
        AmalgamSpec(CircuitsMatroid(["l1", "l2", "l3"], []), CircuitsMatroid(["l1", "l2", "l3", "d"], []))
    with pytest.raises(InputError):   # non-simple side
        AmalgamSpec(CircuitsMatroid(["l1", "l2", "c"], [["c"]]), CircuitsMatroid(["l1", "l2", "d"], []))
    with pytest.raises(InputError):   # sides disagree on the line
        AmalgamSpec(CircuitsMatroid(["l1", "l2", "l3"], [["l1", "l2", "l3"]]),
                    CircuitsMatroid(["l1", "l2", "l3", "d"], [["l1", "l2", "l3", "d"]]))


def test_label_errors():
    spec = AmalgamSpec(_fano("c"), _fano("d"))
    with pytest.raises(InputError):
        spec.mask(["nope"])


seeds = st.integers(0, 10**6)


@given(seeds)
def test_table_matches_direct_formula(seed):
    spec = random_spec(random.Random(seed), p=5, max_elements=8)
    table = rank_superset_min_table(spec)
    rng = random.Random(seed)
    for X in rng.sample(range(1 << spec.n), min(20, 1 << spec.n)):
        assert table[X] == rank_superset_min(spec, X)


@given(seeds)
def test_closure_test_matches_rank_formula(seed):
    spec = random_spec(random.Random(seed), p=7, max_elements=10)
    table = rank_superset_min_table(spec)
    for X in range(1 << spec.n):
        assert jackal_is_dependent(spec, X) == (table[X] < popcount(X))


@given(seeds)
def test_amalgam_restricts_to_both_sides(seed):
    spec = random_spec(random.Random(seed), p=7, max_elements=10)
    A = amalgam_matroid(spec.m1, spec.m2)
    assert matroids_equal(A.restrict(list(spec.m1.ground)), spec.m1)
    r2 = A.restrict([e for e in A.ground if e in spec.m2.ground])
    perm = [list(r2.ground).index(e) for e in spec.m2.ground]
    for m in range(1 << spec.m2.n):
        lifted = sum(1 << perm[i] for i in range(spec.m2.n) if m >> i & 1)
        assert r2.indep_mask(lifted) == spec.m2.indep_mask(m)


@given(seeds)
def test_amalgam_is_matroid_with_expected_rank(seed):
    spec = random_spec(random.Random(seed), p=5, max_elements=9)
    A = amalgam_matroid(spec.m1, spec.m2)
    assert is_matroid(A.n, A.independent_masks())
    assert A.rank() == spec.m1.rank() + spec.m2.rank() - 2
