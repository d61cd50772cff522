import random
from fractions import Fraction

import pytest

from mcpp import battery
from mcpp.errors import InvalidJoinTree, NotDownwardClosed, ValidationError
from mcpp.exactmath import LPModel, RVector, enumerate_vertices, rank
from mcpp.hypergraph import JoinTree, all_join_trees
from mcpp.oracle import enumerate_SH
from mcpp.relaxation import (
    build_affine_hull,
    build_MC_cap,
    build_MC_T,
    check_cap_equals_T,
    implies,
)


def test_MC_T_counts():
    assert build_MC_T(battery.family("EDGE22")).counts() == {
        "multiple-choice": 2,
        "vertex-edge": 4,
        "nonnegativity": 8,
    }
    assert build_MC_T(battery.family("PATH3")).counts() == {
        "multiple-choice": 3,
        "vertex-edge": 8,
        "nonnegativity": 14,
    }
    two = build_MC_T(battery.family("TWO_3EDGES")).counts()
    assert two["tree-intersection"] == 4


def test_MC_cap_counts_triangle():
    counts = build_MC_cap(battery.family("TRI")).counts()
    assert counts == {"multiple-choice": 3, "vertex-edge": 12, "nonnegativity": 18}


def test_invalid_tree_rejected():
    fam = battery.family("PATH3")
    with pytest.raises(InvalidJoinTree):
        build_MC_T(fam, JoinTree(((1, 2),), ()))


@pytest.mark.parametrize("name", ["EDGE22", "PATH3", "EDGE3_PAIRS", "TRI", "C4"])
def test_multilinear_points_satisfy_relaxations(name):
    fam = battery.family(name)
    systems = [build_MC_cap(fam).system]
    if name not in ("TRI", "C4"):
        systems.append(build_MC_T(fam).system)
    for w in enumerate_SH(fam):
        assert all(s.satisfied_by(w) for s in systems)


@pytest.mark.parametrize("name", ["TRI", "C4", "PATH3", "TWO_3EDGES"])
def test_lp_bound_chain(name):
    fam = battery.family(name)
    rng = random.Random(7)
    SH = enumerate_SH(fam)
    cap = LPModel(build_MC_cap(fam).system)
    tree = None
    if name in ("PATH3", "TWO_3EDGES"):
        tree = LPModel(build_MC_T(fam).system)
    for _ in range(15):
        c = RVector(fam.labels, tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in fam.labels))
        brute = max(c.dot(w) for w in SH)
        lp_cap = cap.maximize(c).value
        assert brute <= lp_cap
        if tree is not None:
            assert lp_cap <= tree.maximize(c).value


def test_affine_hull_examples():
    fam = battery.family("EDGE22")
    hull = build_affine_hull(fam, (2, 4))
    assert hull.rank == 5 and hull.coincide()
    assert len(fam) - hull.rank == 3
    empty = battery.family("EMPTY22")
    assert len(empty) - build_affine_hull(empty, (2, 4)).rank == 2
    assert build_affine_hull(battery.family("PATH3"), (2, 4, 6)).coincide()


def test_affine_hull_annihilates_and_complements_dimension():
    for name in ("PATH3", "FULL3", "PATH3_MIXED"):
        fam = battery.family(name)
        SH = enumerate_SH(fam)
        hull = build_affine_hull(fam, tuple(b[0] for b in fam.partition.blocks))
        assert all(hull.d_form.system.satisfied_by(w) for w in SH)
        assert hull.rank + SH.dim == len(fam)


def test_affine_hull_refusals():
    with pytest.raises(NotDownwardClosed):
        build_affine_hull(battery.family("TWO_3EDGES"), (1, 3, 5, 7))
    with pytest.raises(ValidationError):
        build_affine_hull(battery.family("PATH3"), (1, 2, 3))


def test_cap_equals_T_examples():
    assert check_cap_equals_T(battery.family("PATH3")).ok
    rep = check_cap_equals_T(battery.family("STAR_3EDGES"))
    assert rep.ok and rep.checked > 0


def test_join_tree_choice_independence():
    fam = battery.family("STAR_3EDGES")
    trees = all_join_trees(fam.hypergraph)
    assert len(trees) == 3
    a, b = (build_MC_T(fam, t).system for t in trees[:2])
    assert set(a.equalities) != set(b.equalities)
    assert implies(a, b).ok and implies(b, a).ok


def test_MC_T_vertices_equal_SH_when_acyclic():
    for name in ("EDGE32", "PATH3", "EDGE3_PAIRS"):
        fam = battery.family(name)
        assert set(enumerate_vertices(build_MC_T(fam).system)) == enumerate_SH(fam).as_set()


def test_affine_hull_rank_matches_rank_function():
    fam = battery.family("FULL3")
    hull = build_affine_hull(fam, (2, 4, 6))
    assert rank([c for c, _ in hull.symmetric.system.equalities]) == hull.rank
