from fractions import Fraction

import pytest

from mcpp import battery
from mcpp.errors import BlockConflict, InvalidInequality, NotAFacet, NotDownwardClosed, UnlinearizableMonomial
from mcpp.exactmath import RVector
from mcpp.instance import Partition
from mcpp.lifting import (
    LiftSelection,
    MPInequality,
    MultilinearPoly,
    PartitionClassification,
    check_condition,
    compute_V0_V1,
    cycle_inequalities,
    facet_catalog,
    flip,
    tight_avoidance_check,
    lift,
    linearize,
    proj_leq,
    selections,
    unproj,
    verify_lift_theorem,
)
from mcpp.oracle import enumerate_MP_vertices, enumerate_SH
from mcpp.polytope import certify_inequality

P22 = Partition.of_sizes(2, 2)


def edge_ineq(fam, coefs, delta):
    return MPInequality.build(fam.hypergraph, coefs, delta)


def test_linearize_product(fam22):
    poly = (1 - MultilinearPoly.var(1, P22)) * (1 - MultilinearPoly.var(3, P22))
    a, offset = linearize(poly, fam22)
    assert offset == 1
    assert a.support() == {(1,): -1, (3,): -1, (1, 3): 1}


def test_linearize_block_conflict(fam22):
    with pytest.raises(BlockConflict):
        MultilinearPoly.var(1, P22) * MultilinearPoly.var(2, P22)
    loose = MultilinearPoly.var(1, P22, strict=False) * MultilinearPoly.var(2, P22, strict=False)
    assert loose.terms == {}


def test_linearize_constant_and_unknown(fam22):
    a, offset = linearize(MultilinearPoly.constant(1), fam22)
    assert offset == 1 and not a.support()
    fam = battery.family("EMPTY22")
    with pytest.raises(UnlinearizableMonomial) as err:
        linearize(MultilinearPoly({(1, 3): 1}), fam)
    assert err.value.monomial == (1, 3)


def test_linearize_agrees_with_evaluation():
    fam = battery.family("PATH3")
    p = fam.partition
    x = [MultilinearPoly.var(i, p) for i in range(1, 7)]
    poly = (1 - x[2] - x[3]) * x[4] + 3 * x[1] * (x[2] + x[3]) - Fraction(1, 2)
    a, offset = linearize(poly, fam)
    for w in enumerate_SH(fam).vectors():
        values = {i: w[(i,)] for i in range(1, 7)}
        assert a.dot(w) + offset == poly.evaluate(values)


def test_V0_V1_examples(fam22):
    mp = enumerate_MP_vertices(fam22.hypergraph)
    cls = compute_V0_V1(edge_ineq(fam22, {(1, 2): 1, 1: -1}, 0), mp)
    assert cls.V0 == {1} and cls.V1 == {2}
    cls = compute_V0_V1(edge_ineq(fam22, {(1, 2): -1}, 0), mp)
    assert cls.V0 == {1, 2} and cls.V1 == set()
    with pytest.raises(InvalidInequality):
        compute_V0_V1(edge_ineq(fam22, {(1, 2): 1}, 0), mp)


def test_cycle_inequality_has_empty_classes():
    fam = battery.family("C4")
    mp = enumerate_MP_vertices(fam.hypergraph)
    want = MPInequality.build(
        fam.hypergraph, {(1, 4): -1, (1, 2): 1, (2, 3): 1, (3, 4): 1, 2: -1, 3: -1}, 0
    )
    cycles = cycle_inequalities(fam.hypergraph, (1, 2, 3, 4))
    assert want.key() in {c.key() for c in cycles}
    assert certify_inequality(want.c, want.delta, mp).is_facet
    cls = compute_V0_V1(want, mp)
    assert cls.V0 == set() and cls.V1 == set()


def test_lift_example(fam22):
    ineq = edge_ineq(fam22, {(1, 2): 1, 1: -1}, 0)
    a, delta = lift(ineq, LiftSelection(((1,), (3,))), fam22)
    assert a.support() == {(1, 3): 1, (1,): -1} and delta == 0


def test_lift_coefficient_structure_and_validity():
    fam = battery.family("EDGE33")
    mp = enumerate_MP_vertices(fam.hypergraph)
    SH = enumerate_SH(fam)
    for ineq in facet_catalog(fam.hypergraph, mp):
        for sel in selections(fam.partition):
            a, delta = lift(ineq, sel, fam)
            assert all(a.dot(w) <= delta for w in SH)
            cover = sel.covered()
            for J, v in a.support().items():
                assert set(J) <= cover and v == ineq.c[fam.edge_of(J)]


def test_lift_with_one_index_per_block_reproduces_original():
    fam = battery.family("C4")
    sel = LiftSelection(tuple((b[0],) for b in fam.partition.blocks))
    for ineq in cycle_inequalities(fam.hypergraph, (1, 2, 3, 4)):
        a, delta = lift(ineq, sel, fam)
        assert delta == ineq.delta
        restricted = {fam.edge_of(J): v for J, v in a.support().items()}
        assert restricted == ineq.c.support()


def test_lift_refuses_non_downward_closed():
    fam = battery.family("TWO_3EDGES")
    ineq = MPInequality.build(fam.hypergraph, {(1, 2, 3): -1}, 0)
    sel = LiftSelection(tuple((b[0],) for b in fam.partition.blocks))
    with pytest.raises(NotDownwardClosed):
        lift(ineq, sel, fam)


def test_check_condition_examples():
    p = Partition.of_sizes(2, 3)
    cls = PartitionClassification(frozenset({1}), frozenset({2}))
    assert check_condition(LiftSelection(((1,), (3, 4))), cls, p)
    p3 = Partition.of_sizes(3, 2)
    cls = PartitionClassification(frozenset({1}), frozenset())
    assert not check_condition(LiftSelection(((1, 2), (4,))), cls, p3)
    empty = PartitionClassification(frozenset(), frozenset())
    assert all(check_condition(s, empty, p3) for s in selections(p3))


def test_selection_order_is_colex():
    p = Partition.of_sizes(3, 2)
    got = [s.subsets[0] for s in selections(p)][::2]
    assert got == [(1,), (2,), (1, 2), (3,), (1, 3), (2, 3)]
    assert len(list(selections(p))) == 12


def test_flip_examples(fam22):
    H = fam22.hypergraph
    mp = enumerate_MP_vertices(H)
    ineq = edge_ineq(fam22, {(1, 2): 1, 1: -1}, 0)
    flipped = flip(ineq, 2, H)
    assert flipped.key() == edge_ineq(fam22, {(1, 2): -1}, 0).key()
    assert flip(flipped, 2, H).key() == ineq.key()
    for z in mp:
        zd = dict(zip(mp.labels, z))
        psi = dict(zd)
        psi[(2,)] = 1 - zd[(2,)]
        psi[(1, 2)] = zd[(1,)] - zd[(1, 2)]
        lhs = sum(c * psi[e] for e, c in ineq.c.support().items()) - ineq.delta
        assert lhs == flipped.c.dot(z) - flipped.delta
    assert certify_inequality(flipped.c, flipped.delta, mp).is_facet


def test_proj_unproj_round_trip():
    for name, D in (("EDGE22", (2, 4)), ("PATH3", (2, 4, 6))):
        fam = battery.family(name)
        SH = enumerate_SH(fam)
        for w in SH.vectors():
            assert unproj(proj_leq(w, D, fam), D, fam) == w
        bary = RVector(fam.labels, tuple(sum(c, Fraction(0)) / len(SH) for c in zip(*SH.points)))
        assert unproj(proj_leq(bary, D, fam), D, fam) == bary


def test_verify_lift_theorem_examples():
    fam = battery.family("EDGE22")
    mp = enumerate_MP_vertices(fam.hypergraph)
    ineq = edge_ineq(fam, {(1, 2): 1, 1: -1}, 0)
    rep = verify_lift_theorem(ineq, fam, mp, enumerate_SH(fam))
    assert rep.ok and all(v.condition and v.certificate.is_facet for v in rep.verdicts)

    fam = battery.family("EDGE32")
    mp = enumerate_MP_vertices(fam.hypergraph)
    rep = verify_lift_theorem(edge_ineq(fam, {(1, 2): 1, 1: -1}, 0), fam, mp, enumerate_SH(fam))
    assert rep.ok
    for v in rep.verdicts:
        assert v.certificate.is_facet == (len(v.selection.of(1)) == 1)

    with pytest.raises(NotAFacet):
        verify_lift_theorem(edge_ineq(fam, {1: -1}, 0), fam, mp, enumerate_SH(fam))


def test_tight_avoidance_on_single_edge():
    fam = battery.family("EDGE32")
    mp = enumerate_MP_vertices(fam.hypergraph)
    cases = tight_avoidance_check(edge_ineq(fam, {(1, 2): -1}, 0), fam.hypergraph, mp)
    assert cases and all(c.ok for c in cases)
