import pytest

from mcpp import battery
from mcpp.decompose import (
    Decomposition,
    check_precondition,
    intersection_points,
    sub_family,
    verify_decomposition,
)
from mcpp.errors import NotACover, ValidationError
from mcpp.hypergraph import Hypergraph
from mcpp.instance import MonomialFamily, Partition
from mcpp.oracle import enumerate_SH


def family(sizes, edges):
    p = Partition.of_sizes(*sizes)
    return MonomialFamily(p, Hypergraph(p.ids, tuple(edges)))


def parts(v1, e1, v2, e2):
    return Decomposition(Hypergraph(v1, tuple(e1)), Hypergraph(v2, tuple(e2)))


def test_precondition_examples():
    assert check_precondition(parts((1, 2), [(1, 2)], (3, 4), [(3, 4)]))
    assert check_precondition(parts((1, 2), [(1, 2)], (2, 3), [(2, 3)]))
    assert check_precondition(
        parts((1, 2, 3), [(1, 2, 3), (1, 2)], (1, 2, 4), [(1, 2, 4), (1, 2)])
    )
    # shared pair that is an edge of neither part
    assert not check_precondition(parts((1, 2, 3), [(1, 2, 3)], (1, 2, 4), [(1, 2, 4)]))
    # shared pair that is an edge of only one part
    assert not check_precondition(parts((1, 2, 3), [(1, 2), (2, 3)], (1, 3), [(1, 3)]))


def test_not_a_cover():
    fam = battery.family("PATH3")
    d = parts((1, 2), [(1, 2)], (3,), [])
    with pytest.raises(NotACover):
        check_precondition(d, fam.hypergraph)
    with pytest.raises(NotACover):
        verify_decomposition(d, fam)


def test_sub_family_keeps_original_labels():
    fam = battery.family("PATH3")
    sub = sub_family(fam, Hypergraph((2, 3), ((2, 3),)))
    assert sub.partition.blocks == ((3, 4), (5, 6))
    assert (3, 5) in sub.label_set and (1,) not in sub.label_set


def test_path_split_is_exact():
    fam = battery.family("PATH3")
    rep = verify_decomposition(parts((1, 2), [(1, 2)], (2, 3), [(2, 3)]), fam)
    assert rep.ok and rep.precondition and rep.routes == ("jointree", "jointree")
    pts = intersection_points(parts((1, 2), [(1, 2)], (2, 3), [(2, 3)]), fam)
    assert pts.as_set() == enumerate_SH(fam).as_set()


def test_cyclic_part_uses_multipliers():
    fam = family((2, 2, 2, 2), [(1, 2), (2, 3), (1, 3), (3, 4)])
    d = parts((1, 2, 3), [(1, 2), (2, 3), (1, 3)], (3, 4), [(3, 4)])
    rep = verify_decomposition(d, fam)
    assert rep.ok and rep.routes == ("hull-multipliers", "jointree")


def test_failed_precondition_refused_then_counterexample():
    fam = battery.family("TRI")
    d = parts((1, 2, 3), [(1, 2), (2, 3)], (1, 3), [(1, 3)])
    with pytest.raises(ValidationError) as err:
        verify_decomposition(d, fam)
    assert err.value.kind == "precondition-failed"
    rep = verify_decomposition(d, fam, require_precondition=False)
    assert not rep.ok and not rep.precondition
    assert any(v not in (0, 1) for v in rep.counterexample)
    assert rep.to_dict()["ok"] is False
