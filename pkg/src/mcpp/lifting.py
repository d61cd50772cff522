"""Lifting inequalities of the multilinear polytope to the multiple choice setting.

An inequality ``c.z <= delta`` over L(V) u E is lifted by substituting
``z_I -> sum_{i in S_I} w_i`` for a selection of proper subsets S_I and
linearizing. Whether the lift stays facet-defining is decided by which blocks
force tightness when fixed to 0 or 1 (V0 and V1).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import (
    BlockConflict,
    InvalidInequality,
    LabelMismatch,
    NotAFacet,
    NotDownwardClosed,
    UnlinearizableMonomial,
    ValidationError,
)
from .exactmath import PointSet, RVector, affine_rank, as_rational
from .hypergraph import Hypergraph, is_downward_closed
from .instance import MonomialFamily, Partition
from .oracle import mp_labels
from .polytope import IneqCertificate, certify_inequality


class MultilinearPoly:
    """Polynomial in 0-1 variables, keyed by sorted index tuples (() is the constant).

    Products use x*x = x. With a partition, a product touching one block at two
    different indices is a block conflict: ``strict`` raises, otherwise the
    monomial is dropped since it vanishes on every feasible point.
    """

    __slots__ = ("terms", "partition", "strict")

    def __init__(self, terms: Mapping | None = None, partition: Partition | None = None, strict: bool = True):
        self.partition = partition
        self.strict = strict
        self.terms: dict = {}
        for J, c in (terms or {}).items():
            c = as_rational(c)
            if c:
                J = tuple(sorted(set(J)))
                self._check(J)
                self.terms[J] = self.terms.get(J, Fraction(0)) + c
        self.terms = {J: c for J, c in self.terms.items() if c}

    def _check(self, J) -> bool:
        if self.partition is None:
            return True
        blocks = [self.partition.block_of(i) for i in J]
        if len(set(blocks)) == len(blocks):
            return True
        if self.strict:
            raise BlockConflict(f"monomial {list(J)} hits a block twice")
        return False

    def _new(self, terms: dict) -> MultilinearPoly:
        p = MultilinearPoly(None, self.partition, self.strict)
        p.terms = {J: c for J, c in terms.items() if c}
        return p

    @classmethod
    def constant(cls, c, partition=None, strict=True) -> MultilinearPoly:
        return cls({(): c}, partition, strict)

    @classmethod
    def var(cls, i, partition=None, strict=True) -> MultilinearPoly:
        return cls({(i,): 1}, partition, strict)

    @classmethod
    def linear(cls, indices: Iterable, partition=None, strict=True) -> MultilinearPoly:
        return cls({(i,): 1 for i in indices}, partition, strict)

    def _coerce(self, other) -> MultilinearPoly:
        if isinstance(other, MultilinearPoly):
            return other
        return MultilinearPoly.constant(other, self.partition, self.strict)

    def __add__(self, other) -> MultilinearPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for J, c in other.terms.items():
            out[J] = out.get(J, Fraction(0)) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self) -> MultilinearPoly:
        return self._new({J: -c for J, c in self.terms.items()})

    def __sub__(self, other) -> MultilinearPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MultilinearPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MultilinearPoly:
        other = self._coerce(other)
        out: dict = {}
        for J1, c1 in self.terms.items():
            for J2, c2 in other.terms.items():
                J = tuple(sorted(set(J1) | set(J2)))
                if not self._check(J):
                    continue
                out[J] = out.get(J, Fraction(0)) + c1 * c2
        return self._new(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, MultilinearPoly) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"MultilinearPoly({self.terms!r})"

    def evaluate(self, values: Mapping) -> Fraction:
        return sum(
            (c * math.prod(values[i] for i in J) for J, c in self.terms.items()), Fraction(0)
        )


def product(polys: Iterable[MultilinearPoly], partition=None, strict=True) -> MultilinearPoly:
    out = MultilinearPoly.constant(1, partition, strict)
    for p in polys:
        out = out * p
    return out


def linearize(poly: MultilinearPoly, labels) -> tuple[RVector, Fraction]:
    """Replace each monomial by its coordinate. Returns (vector, constant offset)."""
    if isinstance(labels, MonomialFamily):
        labels = labels.labels
    labels = tuple(labels)
    known = set(labels)
    coefs = {}
    for J, c in poly.terms.items():
        if not J:
            continue
        if J not in known:
            raise UnlinearizableMonomial(J)
        coefs[J] = c
    return RVector.from_mapping(labels, coefs), poly.terms.get((), Fraction(0))


# ---------------------------------------------------------------------------
# inequalities over the multilinear polytope


@dataclass(frozen=True)
class MPInequality:
    """``c.z <= delta`` with coordinates L(V) u E (singleton tuples for vertices)."""

    c: RVector
    delta: Fraction
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "delta", as_rational(self.delta))

    @classmethod
    def build(cls, H: Hypergraph, coefs: Mapping, delta, name: str = "") -> MPInequality:
        labels = mp_labels(H)
        norm = {}
        for e, v in coefs.items():
            e = (e,) if isinstance(e, int) else tuple(sorted(e))
            norm[e] = norm.get(e, Fraction(0)) + as_rational(v)
        return cls(RVector.from_mapping(labels, norm), delta, name)

    def key(self) -> tuple:
        return (self.c.values, self.delta)

    def describe(self) -> str:
        text = ""
        for e, v in self.c.support().items():
            term = ("" if abs(v) == 1 else f"{abs(v)} ") + "z_" + "_".join(map(str, e))
            if not text:
                text = "-" + term if v < 0 else term
            else:
                text += (" - " if v < 0 else " + ") + term
        return f"{text or '0'} <= {self.delta}"


@dataclass(frozen=True)
class PartitionClassification:
    V0: frozenset
    V1: frozenset

    @property
    def degenerate(self) -> bool:
        return bool(self.V0 & self.V1)

    def to_dict(self) -> dict:
        return {"V0": sorted(self.V0), "V1": sorted(self.V1)}


def _mp_check(ineq: MPInequality, mpverts: PointSet) -> None:
    if ineq.c.labels != mpverts.labels:
        raise LabelMismatch("inequality labels differ from multilinear vertex labels")


def compute_V0_V1(ineq: MPInequality, mpverts: PointSet) -> PartitionClassification:
    """V0 (V1): blocks I such that every vertex with z_I = 0 (z_I = 1) is tight."""
    _mp_check(ineq, mpverts)
    singles = [k for k, e in enumerate(mpverts.labels) if len(e) == 1]
    tight_when = {(k, b): True for k in singles for b in (0, 1)}
    for z in mpverts:
        lhs = ineq.c.dot(z)
        if lhs > ineq.delta:
            raise InvalidInequality(f"{ineq.describe()} is violated by a multilinear vertex")
        if lhs < ineq.delta:
            for k in singles:
                tight_when[(k, z[k])] = False
    V0 = frozenset(mpverts.labels[k][0] for k in singles if tight_when[(k, 0)])
    V1 = frozenset(mpverts.labels[k][0] for k in singles if tight_when[(k, 1)])
    return PartitionClassification(V0, V1)


@dataclass(frozen=True)
class LiftSelection:
    """One non-empty proper subset S_I per block, listed in block order."""

    subsets: tuple

    def __post_init__(self):
        object.__setattr__(self, "subsets", tuple(tuple(sorted(s)) for s in self.subsets))

    def validate(self, p: Partition) -> LiftSelection:
        if len(self.subsets) != len(p.blocks):
            raise ValidationError("selection needs one subset per block")
        for k, (s, b) in enumerate(zip(self.subsets, p.blocks), start=1):
            if not s or not set(s) < set(b):
                raise ValidationError(f"S for block I{k} must be a non-empty proper subset of {list(b)}")
        return self

    def of(self, block: int) -> tuple:
        return self.subsets[block - 1]

    def covered(self) -> frozenset:
        return frozenset(i for s in self.subsets for i in s)

    def to_list(self) -> list:
        return [list(s) for s in self.subsets]


def _colex_subsets(block: tuple) -> list[tuple]:
    subs = [
        c for k in range(1, len(block)) for c in itertools.combinations(block, k)
    ]
    return sorted(subs, key=lambda s: tuple(sorted(s, reverse=True)))


def selections(p: Partition):
    """All lift selections, blocks in order, subsets of each block in colex order."""
    for combo in itertools.product(*(_colex_subsets(b) for b in p.blocks)):
        yield LiftSelection(combo)


def _require_downward_closed(H: Hypergraph) -> None:
    if not is_downward_closed(H):
        raise NotDownwardClosed("operation requires a downward-closed hypergraph")


def lift(ineq: MPInequality, sel: LiftSelection, fam: MonomialFamily) -> tuple[RVector, Fraction]:
    """Lifted inequality ``a.w <= delta`` over the family coordinates."""
    H = fam.hypergraph
    _require_downward_closed(H)
    if ineq.c.labels != mp_labels(H):
        raise LabelMismatch("inequality labels differ from L(V) u E")
    p = fam.partition
    sel.validate(p)
    total = MultilinearPoly(None, p)
    for e, c in zip(ineq.c.labels, ineq.c.values):
        if c:
            term = product((MultilinearPoly.linear(sel.of(I), p) for I in e), p)
            total = total + term * c
    a, offset = linearize(total, fam)
    delta = ineq.delta - offset
    cover = sel.covered()
    cvals = dict(zip(ineq.c.labels, ineq.c.values))
    for J, v in zip(a.labels, a.values):
        want = cvals[fam.edge_of(J)] if set(J) <= cover else 0
        if v != want:
            raise AssertionError(f"lifted coefficient of {J} is {v}, expected {want}")
    return a, delta


def check_condition(sel: LiftSelection, cls: PartitionClassification, p: Partition) -> bool:
    """|S_I| = 1 on V0 and |S_I| = |I| - 1 on V1."""
    return all(len(sel.of(I)) == 1 for I in cls.V0) and all(
        len(sel.of(I)) == p.size(I) - 1 for I in cls.V1
    )


def flip(ineq: MPInequality, I: int, H: Hypergraph) -> MPInequality:
    """Substitute z_e -> (1 - z_I) prod_{e - I} z for every e containing I."""
    _require_downward_closed(H)
    labels = mp_labels(H)
    if ineq.c.labels != labels:
        raise LabelMismatch("inequality labels differ from L(V) u E")
    new: dict = {}
    delta = ineq.delta
    for e, c in zip(labels, ineq.c.values):
        if not c:
            continue
        if I not in e:
            new[e] = new.get(e, Fraction(0)) + c
            continue
        rest = tuple(v for v in e if v != I)
        new[e] = new.get(e, Fraction(0)) - c
        if rest:
            new[rest] = new.get(rest, Fraction(0)) + c
        else:
            delta -= c
    name = f"flip_{I}({ineq.name})" if ineq.name else ""
    return MPInequality(RVector.from_mapping(labels, new), delta, name)


# ---------------------------------------------------------------------------
# the full-dimensional projection and its inverse


def proj_leq(w: RVector, D, fam: MonomialFamily) -> RVector:
    """Keep only coordinates avoiding D."""
    labels = fam.leq(D)
    if w.labels != fam.labels:
        raise LabelMismatch("point labels differ from the family")
    return RVector(labels, tuple(w[J] for J in labels))


@lru_cache(maxsize=64)
def unprojection_map(fam: MonomialFamily, D: tuple) -> dict:
    """For each family label J, ``(coefficients over leq labels, constant)``
    expressing w_J by replacing each index of D with one minus the rest of its block."""
    _require_downward_closed(fam.hypergraph)
    D = fam.validate_transversal(D)
    Dset = set(D)
    p = fam.partition
    leq = fam.leq(D)
    out = {}
    for J in fam.labels:
        factors = []
        for i in J:
            if i in Dset:
                others = [k for k in p.block(p.block_of(i)) if k != i]
                factors.append(1 - MultilinearPoly.linear(others, p))
            else:
                factors.append(MultilinearPoly.var(i, p))
        vec, const = linearize(product(factors, p), leq)
        out[J] = (vec.values, const)
    return out


def unproj(v: RVector, D, fam: MonomialFamily) -> RVector:
    D = fam.validate_transversal(D)
    leq = fam.leq(D)
    if v.labels != leq:
        raise LabelMismatch("point labels differ from the labels avoiding D")
    m = unprojection_map(fam, D)
    vals = []
    for J in fam.labels:
        coefs, const = m[J]
        vals.append(const + sum((c * x for c, x in zip(coefs, v.values) if c), Fraction(0)))
    return RVector(fam.labels, tuple(vals))


# ---------------------------------------------------------------------------
# the lifting theorem, checked exhaustively


@dataclass(frozen=True)
class SelectionVerdict:
    selection: LiftSelection
    condition: bool
    certificate: IneqCertificate

    @property
    def agrees(self) -> bool:
        return self.certificate.valid and self.condition == self.certificate.is_facet

    def to_dict(self) -> dict:
        return {
            "selection": self.selection.to_list(),
            "condition": self.condition,
            "status": self.certificate.status,
            "agrees": self.agrees,
        }


@dataclass(frozen=True)
class LiftReport:
    inequality: MPInequality
    classification: PartitionClassification
    verdicts: tuple

    @property
    def disagreements(self) -> list[SelectionVerdict]:
        return [v for v in self.verdicts if not v.agrees]

    @property
    def ok(self) -> bool:
        return not self.disagreements


def verify_lift_theorem(
    ineq: MPInequality, fam: MonomialFamily, mpverts: PointSet, mcverts: PointSet
) -> LiftReport:
    """Compare the V0/V1 condition with rank certification for every selection."""
    cert = certify_inequality(ineq.c, ineq.delta, mpverts)
    if not cert.is_facet:
        raise NotAFacet(f"{ineq.describe()} is {cert.status} for the multilinear polytope")
    cls = compute_V0_V1(ineq, mpverts)
    verdicts = []
    for sel in selections(fam.partition):
        a, delta = lift(ineq, sel, fam)
        verdicts.append(
            SelectionVerdict(
                sel, check_condition(sel, cls, fam.partition), certify_inequality(a, delta, mcverts)
            )
        )
    return LiftReport(ineq, cls, tuple(verdicts))


def E_U(H: Hypergraph, U) -> list[tuple]:
    """Sets e (possibly empty) outside U whose union with U is a vertex or an edge."""
    U = set(U)
    groups = set(H.groups())
    out = [()] if tuple(sorted(U)) in groups else []
    for e in H.groups():
        if not U & set(e) and tuple(sorted(U | set(e))) in groups:
            out.append(e)
    return out


@dataclass(frozen=True)
class TightAvoidanceCase:
    U: tuple
    E_U: tuple
    rank: int

    @property
    def ok(self) -> bool:
        return self.rank == len(self.E_U) - 1

    def to_dict(self) -> dict:
        return {"U": list(self.U), "E_U": [list(e) for e in self.E_U], "rank": self.rank, "ok": self.ok}


def tight_avoidance_check(ineq: MPInequality, H: Hypergraph, mpverts: PointSet) -> list[TightAvoidanceCase]:
    """For each admissible U with E_U non-empty, the rank of the tight vertices
    with z = 0 on U, projected onto E_U minus the empty set."""
    _require_downward_closed(H)
    cls = compute_V0_V1(ineq, mpverts)
    pos = {e: k for k, e in enumerate(mpverts.labels)}
    tight = [z for z in mpverts if ineq.c.dot(z) == ineq.delta]
    allowed = [v for v in H.vertices if v not in cls.V1]
    cases = []
    for size in range(1, len(allowed) + 1):
        for U in itertools.combinations(allowed, size):
            eu = E_U(H, U)
            if not eu:
                continue
            coords = [pos[e] for e in eu if e]
            FU = [z for z in tight if all(z[pos[(I,)]] == 0 for I in U)]
            proj = {tuple(z[k] for k in coords) for z in FU}
            cases.append(TightAvoidanceCase(U, tuple(eu), affine_rank(sorted(proj))))
    return cases


# ---------------------------------------------------------------------------
# catalog of multilinear facets used as test inputs


def standard_inequalities(H: Hypergraph) -> list[MPInequality]:
    """Bounds and the standard linearization inequalities of every edge."""
    out = []
    for v in H.vertices:
        out.append(MPInequality.build(H, {(v,): -1}, 0, f"z{v}>=0"))
        out.append(MPInequality.build(H, {(v,): 1}, 1, f"z{v}<=1"))
    for e in H.edges:
        tag = "".join(map(str, e))
        out.append(MPInequality.build(H, {e: -1}, 0, f"z{tag}>=0"))
        for v in e:
            out.append(MPInequality.build(H, {e: 1, (v,): -1}, 0, f"z{tag}<=z{v}"))
        coefs = {(v,): 1 for v in e}
        coefs[e] = -1
        out.append(MPInequality.build(H, coefs, len(e) - 1, f"z{tag}>=sum-{len(e) - 1}"))
    return out


def cycle_inequalities(H: Hypergraph, cycle: tuple) -> list[MPInequality]:
    """Odd-subset cycle inequalities for a cycle of graph edges (v1, ..., vk).

    Built from the cut form sum_F x_e - sum_{C-F} x_e <= |F| - 1 with
    x_ij = z_i + z_j - 2 z_ij, then divided by the gcd of the coefficients.
    """
    k = len(cycle)
    cyc_edges = [tuple(sorted((cycle[t], cycle[(t + 1) % k]))) for t in range(k)]
    for e in cyc_edges:
        if not H.has_edge(e):
            raise ValidationError(f"cycle edge {e} is not an edge of the hypergraph")
    out = []
    for size in range(1, k + 1, 2):
        for F in itertools.combinations(range(k), size):
            coefs: dict = {}
            for t, (i, j) in enumerate(cyc_edges):
                s = 1 if t in F else -1
                for key, v in (((i,), s), ((j,), s), ((i, j), -2 * s)):
                    coefs[key] = coefs.get(key, 0) + v
            delta = len(F) - 1
            g = math.gcd(delta, *coefs.values())
            coefs = {e: Fraction(v, g) for e, v in coefs.items()}
            tag = ",".join("".join(map(str, cyc_edges[t])) for t in F)
            out.append(MPInequality.build(H, coefs, Fraction(delta, g), f"cycle[F={tag}]"))
    return out


def facet_catalog(H: Hypergraph, mpverts: PointSet, cycles: Iterable[tuple] = ()) -> list[MPInequality]:
    """Certified multilinear facets among the standard, cycle and flipped inequalities."""
    candidates = standard_inequalities(H)
    for cyc in cycles:
        candidates += cycle_inequalities(H, cyc)
    if is_downward_closed(H):
        more = []
        for ineq in candidates:
            for v in H.vertices:
                more.append(flip(ineq, v, H))
        candidates += more
    seen, out = set(), []
    for ineq in candidates:
        if ineq.key() in seen:
            continue
        seen.add(ineq.key())
        if certify_inequality(ineq.c, ineq.delta, mpverts).is_facet:
            out.append(ineq)
    return out
