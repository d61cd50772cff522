"""Explicit linear systems over the family coordinates.

* the join-tree system: multiple-choice rows, vertex-edge rows, agreement
  rows along join-tree edges whose ends share two or more blocks, and
  nonnegativity;
* the pairwise system: the same, with agreement rows for every pair of edges;
* the affine hull for downward-closed hypergraphs, in a form relative to a
  transversal D and in a symmetric form.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotDownwardClosed
from .exactmath import LinearSystem, LPModel, RVector, rank, same_affine_subspace
from .hypergraph import JoinTree, build_join_tree, is_downward_closed
from .instance import MonomialFamily
from .lifting import unprojection_map

TAGS = (
    "multiple-choice",
    "vertex-edge",
    "tree-intersection",
    "pair-intersection",
    "nonnegativity",
    "affine-hull",
)


@dataclass(frozen=True)
class RelaxationSystem:
    system: LinearSystem
    eq_tags: tuple
    ineq_tags: tuple

    @property
    def labels(self) -> tuple:
        return self.system.labels

    def counts(self) -> dict:
        c = Counter(self.eq_tags) + Counter(self.ineq_tags)
        return {tag: c.get(tag, 0) for tag in TAGS if c.get(tag, 0)}

    def rows(self):
        """(kind, tag, coefficient dict, rhs) for every row, in order."""
        for kind, rows, tags in (
            ("eq", self.system.equalities, self.eq_tags),
            ("le", self.system.inequalities, self.ineq_tags),
        ):
            for (coefs, rhs), tag in zip(rows, tags):
                yield kind, tag, {l: c for l, c in zip(self.labels, coefs) if c}, rhs


class _Builder:
    def __init__(self, labels):
        self.labels = tuple(labels)
        self.pos = {l: k for k, l in enumerate(self.labels)}
        self.eqs: dict = {}
        self.ineqs: dict = {}

    def _row(self, coefs: dict) -> tuple:
        row = [Fraction(0)] * len(self.labels)
        for l, c in coefs.items():
            row[self.pos[l]] += c
        return tuple(row)

    def eq(self, coefs: dict, rhs, tag: str) -> None:
        self.eqs.setdefault((self._row(coefs), Fraction(rhs)), tag)

    def le(self, coefs: dict, rhs, tag: str) -> None:
        self.ineqs.setdefault((self._row(coefs), Fraction(rhs)), tag)

    def build(self) -> RelaxationSystem:
        sys = LinearSystem(self.labels, tuple(self.eqs), tuple(self.ineqs))
        return RelaxationSystem(sys, tuple(self.eqs.values()), tuple(self.ineqs.values()))


def _base_rows(fam: MonomialFamily, b: _Builder) -> None:
    p = fam.partition
    for I in p.ids:
        b.eq({(i,): 1 for i in p.block(I)}, 1, "multiple-choice")
    for e in fam.hypergraph.edges:
        group = fam.group(e)
        for I in e:
            for i in p.block(I):
                coefs = {(i,): Fraction(1)}
                for J in group:
                    if i in J:
                        coefs[J] = coefs.get(J, 0) - 1
                b.eq(coefs, 0, "vertex-edge")


def _agreement_rows(fam: MonomialFamily, e, f, b: _Builder, tag: str) -> None:
    common = tuple(sorted(set(e) & set(f)))
    if len(common) < 2:
        return
    for J0 in fam.group(common):
        s0 = set(J0)
        coefs: dict = {}
        for J in fam.group(e):
            if s0 <= set(J):
                coefs[J] = coefs.get(J, 0) + 1
        for J in fam.group(f):
            if s0 <= set(J):
                coefs[J] = coefs.get(J, 0) - 1
        b.eq(coefs, 0, tag)


def _nonneg_rows(fam: MonomialFamily, b: _Builder) -> None:
    for J in fam.labels:
        b.le({J: -1}, 0, "nonnegativity")


def build_MC_T(fam: MonomialFamily, tree: JoinTree | None = None) -> RelaxationSystem:
    """The join-tree system. Its solution set is the MCPP polytope when H is alpha-acyclic."""
    H = fam.hypergraph
    tree = build_join_tree(H) if tree is None else tree.check(H)
    b = _Builder(fam.labels)
    _base_rows(fam, b)
    for e, f in tree.tree_edges:
        _agreement_rows(fam, e, f, b, "tree-intersection")
    _nonneg_rows(fam, b)
    return b.build()


def build_MC_cap(fam: MonomialFamily) -> RelaxationSystem:
    """Agreement rows for all edge pairs; defined for any hypergraph."""
    b = _Builder(fam.labels)
    _base_rows(fam, b)
    for e, f in itertools.combinations(fam.hypergraph.edges, 2):
        _agreement_rows(fam, e, f, b, "pair-intersection")
    _nonneg_rows(fam, b)
    return b.build()


@dataclass(frozen=True)
class AffineHull:
    D: tuple
    d_form: RelaxationSystem
    symmetric: RelaxationSystem

    def coincide(self) -> bool:
        return same_affine_subspace(self.d_form.system.equalities, self.symmetric.system.equalities)

    @property
    def rank(self) -> int:
        return rank([c for c, _ in self.d_form.system.equalities])


def build_affine_hull(fam: MonomialFamily, D) -> AffineHull:
    """Equalities cutting out the affine hull, for downward-closed hypergraphs only."""
    H = fam.hypergraph
    if not is_downward_closed(H):
        raise NotDownwardClosed("the affine hull is only built for downward-closed hypergraphs")
    D = fam.validate_transversal(D)
    leq = fam.leq(D)
    leq_set = set(leq)
    m = unprojection_map(fam, D)
    b = _Builder(fam.labels)
    for J in fam.labels:
        if J in leq_set:
            continue
        coefs, const = m[J]
        row = {J: Fraction(1)}
        for l, c in zip(leq, coefs):
            if c:
                row[l] = row.get(l, 0) - c
        b.eq(row, const, "affine-hull")
    d_form = b.build()

    s = _Builder(fam.labels)
    p = fam.partition
    for I in p.ids:
        s.eq({(i,): 1 for i in p.block(I)}, 1, "multiple-choice")
    for big in H.edges:
        for I in big:
            small = tuple(v for v in big if v != I)
            for J in fam.group(small):
                row = {J: Fraction(1)}
                for J2 in fam.group(big):
                    if set(J) < set(J2):
                        row[J2] = row.get(J2, 0) - 1
                s.eq(row, 0, "affine-hull")
    return AffineHull(D, d_form, s.build())


@dataclass(frozen=True)
class ImplicationReport:
    ok: bool
    checked: int
    failures: tuple  # (row coefficients, rhs, min, max)


def _range_over(model: LPModel, coefs) -> tuple:
    lo = model.minimize(coefs)
    hi = model.maximize(coefs)
    if lo.status != "optimal" or hi.status != "optimal":
        raise AssertionError(f"LP over the relaxation ended {lo.status}/{hi.status}")
    return lo.value, hi.value


def implies(a: LinearSystem, b: LinearSystem, model: LPModel | None = None) -> ImplicationReport:
    """Every row of ``b`` holds on the polytope of ``a`` (equalities as constants)."""
    model = model or LPModel(a)
    failures, checked = [], 0
    for coefs, rhs in b.equalities:
        lo, hi = _range_over(model, coefs)
        checked += 1
        if lo != rhs or hi != rhs:
            failures.append((coefs, rhs, lo, hi))
    for coefs, rhs in b.inequalities:
        hi = model.maximize(coefs).value
        checked += 1
        if hi > rhs:
            failures.append((coefs, rhs, None, hi))
    return ImplicationReport(not failures, checked, tuple(failures))


def check_cap_equals_T(fam: MonomialFamily, tree: JoinTree | None = None) -> ImplicationReport:
    """Each pairwise agreement row missing from the join-tree system has
    ``min = max = 0`` over the join-tree polytope."""
    T = build_MC_T(fam, tree).system
    cap = build_MC_cap(fam).system
    present = set(T.equalities)
    extra = LinearSystem(T.labels, tuple(r for r in cap.equalities if r not in present), ())
    return implies(T, extra)


def satisfied_by_all(rs: RelaxationSystem, points) -> bool:
    return all(rs.system.satisfied_by(p) for p in points)


def objective_vector(fam: MonomialFamily, coefs: dict) -> RVector:
    return RVector.from_mapping(fam.labels, coefs)
