import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcpp.errors import GuardExceeded, LabelMismatch
from mcpp.exactmath import (
    LinearSystem,
    LPModel,
    PointSet,
    RVector,
    affine_rank,
    as_rational,
    enumerate_vertices,
    lp_maximize,
    nullspace,
    rank,
    same_affine_subspace,
    solve,
)

small = st.integers(min_value=-5, max_value=5)
fractions_ = st.builds(Fraction, small, st.integers(min_value=1, max_value=4))


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(fractions_, min_size=c, max_size=c), min_size=1, max_size=max_rows)
    )


def test_as_rational_rejects_floats():
    assert as_rational("3/2") == Fraction(3, 2)
    assert as_rational(4) == 4
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_rank_examples():
    assert rank([(1, 0), (0, 1)]) == 2
    assert rank([(0, 0), (0, 0)]) == 0
    assert rank([(1, 1, 0), (0, 1, 1), (1, 2, 1)]) == 2


def test_affine_rank_examples():
    assert affine_rank([(1, 2)]) == 0
    assert affine_rank([(0, 0), (1, 0), (0, 1)]) == 2
    assert affine_rank([]) == -1


@given(matrices())
def test_rank_equals_rank_of_transpose(m):
    assert rank(m) == rank(list(zip(*m)))


@given(matrices(), fractions_.filter(bool))
def test_rank_invariant_under_row_scaling(m, s):
    assert rank(m) == rank([[x * s for x in row] for row in m])


@given(matrices())
def test_nullspace_dimension_and_kernel(m):
    basis = nullspace(m)
    assert len(basis) == len(m[0]) - rank(m)
    for x in basis:
        assert all(sum(a * b for a, b in zip(row, x)) == 0 for row in m)


def test_solve_consistent_and_inconsistent():
    assert solve([(1, 1), (1, -1)], (2, 0)) == [1, 1]
    assert solve([(1, 1), (2, 2)], (1, 3)) is None


def test_same_affine_subspace():
    a = [((1, 1), Fraction(1))]
    b = [((2, 2), Fraction(2))]
    c = [((1, -1), Fraction(0))]
    assert same_affine_subspace(a, b)
    assert not same_affine_subspace(a, c)


def test_rvector_labels():
    v = RVector.from_mapping(("a", "b"), {"b": 2})
    assert v["b"] == 2 and v.support() == {"b": 2}
    with pytest.raises(LabelMismatch):
        RVector.from_mapping(("a",), {"c": 1})
    with pytest.raises(LabelMismatch):
        v.dot(RVector(("x", "y"), (1, 1)))


def simplex2():
    return LinearSystem.build(("w1", "w2"), [({"w1": 1, "w2": 1}, 1)], LinearSystem.nonnegativity_rows(("w1", "w2")))


def test_lp_simple():
    res = lp_maximize(simplex2(), {"w1": 1})
    assert res.status == "optimal" and res.value == 1
    assert res.optimizer.values == (1, 0)
    assert res.unique


def test_lp_infeasible_and_unbounded():
    infeasible = LinearSystem.build(("x",), [({"x": 1}, 1), ({"x": 1}, 2)])
    assert lp_maximize(infeasible, {"x": 1}).status == "infeasible"
    unbounded = LinearSystem.build(("x",), [], [({"x": -1}, 0)])
    assert lp_maximize(unbounded, {"x": 1}).status == "unbounded"
    free = LinearSystem.build(("x", "y"), [({"x": 1, "y": 1}, 0)], [({"x": 1}, 3), ({"x": -1}, 3)])
    res = lp_maximize(free, {"y": 1})
    assert res.value == 3 and res.optimizer.values == (-3, 3)


def test_lp_model_reuse():
    model = LPModel(simplex2())
    assert model.maximize({"w2": 1}).value == 1
    assert model.minimize({"w2": 1}).value == 0
    assert model.maximize({"w1": 1, "w2": 1}).unique is False


def test_enumerate_simplex():
    ps = enumerate_vertices(simplex2())
    assert set(ps) == {(1, 0), (0, 1)}


def test_enumerate_guard():
    labels = tuple(range(30))
    sys = LinearSystem.build(labels, [], LinearSystem.nonnegativity_rows(labels))
    with pytest.raises(GuardExceeded):
        enumerate_vertices(sys)


def brute_vertices(sys: LinearSystem):
    """Vertices by trying every subset of inequality rows as the tight set."""
    d = len(sys.labels)
    eqs = [c for c, _ in sys.equalities]
    found = set()
    for k in range(len(sys.inequalities) + 1):
        for rows in itertools.combinations(sys.inequalities, k):
            m = eqs + [c for c, _ in rows]
            if rank(m) != d or len(m) != d:
                continue
            x = solve(m, [r for _, r in sys.equalities] + [r for _, r in rows])
            if x is not None and sys.satisfied_by(x):
                found.add(tuple(x))
    return found


@st.composite
def boxed_polytopes(draw):
    d = draw(st.integers(1, 3))
    labels = tuple(f"x{k}" for k in range(d))
    ineqs = []
    for k in range(d):
        row = [0] * d
        row[k] = 1
        ineqs.append((tuple(row), Fraction(draw(st.integers(1, 3)))))
        row = [0] * d
        row[k] = -1
        ineqs.append((tuple(row), Fraction(0)))
    for _ in range(draw(st.integers(0, 3))):
        ineqs.append((tuple(draw(small) for _ in range(d)), Fraction(draw(st.integers(0, 6)))))
    eqs = ()
    if d == 3 and draw(st.booleans()):
        eqs = (((1, 1, 1), Fraction(draw(st.integers(0, 4)))),)
    return LinearSystem(labels, eqs, tuple(ineqs))


@settings(max_examples=60, deadline=None)
@given(boxed_polytopes())
def test_vertex_enumeration_matches_brute_force(sys):
    assert set(enumerate_vertices(sys)) == brute_vertices(sys)


@settings(max_examples=60, deadline=None)
@given(boxed_polytopes(), st.lists(small, min_size=3, max_size=3))
def test_lp_optimum_attained_and_vertex_tight(sys, c):
    c = c[: len(sys.labels)]
    res = lp_maximize(sys, c)
    verts = enumerate_vertices(sys)
    if not len(verts):
        assert res.status == "infeasible"
        return
    assert res.status == "optimal"
    assert sys.satisfied_by(res.optimizer)
    assert res.value == res.optimizer.dot(c)
    assert res.value == max(sum(a * b for a, b in zip(c, v)) for v in verts)
    for v in verts:
        assert sys.tight_rank(v) == len(sys.labels)


def test_pointset_dim_and_projection():
    ps = PointSet(("a", "b"), ((0, 0), (1, 0), (0, 1)))
    assert ps.dim == 2
    assert ps.project(("a",)).points == ((0,), (1,))
