"""Certificates over vertex lists: validity, faces, facets, hull membership."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import LabelMismatch
from .exactmath import (
    DEFAULT_VERTEX_GUARD,
    LinearSystem,
    LPModel,
    PointSet,
    RVector,
    affine_rank,
    as_rational,
    enumerate_vertices,
)

STATUSES = ("invalid", "valid-not-tight", "implicit-equality", "face", "facet")


@dataclass(frozen=True)
class IneqCertificate:
    status: str
    tight_points: PointSet
    face_dim: int
    polytope_dim: int
    violated: int = 0  # number of vertices with a.v > delta

    @property
    def valid(self) -> bool:
        return self.status != "invalid"

    @property
    def is_facet(self) -> bool:
        return self.status == "facet"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "tight": len(self.tight_points),
            "face_dim": self.face_dim,
            "polytope_dim": self.polytope_dim,
            "violated": self.violated,
        }


def _coefs(a, labels) -> tuple:
    if isinstance(a, RVector):
        if a.labels != tuple(labels):
            raise LabelMismatch("inequality labels differ from vertex labels")
        return a.values
    a = tuple(as_rational(c) for c in a)
    if len(a) != len(labels):
        raise LabelMismatch("inequality length differs from vertex labels")
    return a


def certify_inequality(a, delta, vertices: PointSet) -> IneqCertificate:
    """Classify ``a.w <= delta`` against conv(vertices) using exact ranks."""
    if not len(vertices):
        raise ValueError("empty vertex set")
    a = _coefs(a, vertices.labels)
    delta = as_rational(delta)
    tight, violated = [], 0
    for v in vertices:
        lhs = sum((c * x for c, x in zip(a, v) if c and x), Fraction(0))
        if lhs > delta:
            violated += 1
        elif lhs == delta:
            tight.append(v)
    tight_set = PointSet(vertices.labels, tuple(tight))
    face_dim = affine_rank(tight)
    dim = vertices.dim
    if violated:
        status = "invalid"
    elif not tight:
        status = "valid-not-tight"
    elif len(tight) == len(vertices):
        status = "implicit-equality"
    elif face_dim == dim - 1:
        status = "facet"
    else:
        status = "face"
    return IneqCertificate(status, tight_set, face_dim, dim, violated)


@dataclass(frozen=True)
class Membership:
    inside: bool
    separator: tuple | None = None  # (a: RVector, delta) with a.v <= delta on the set, a.p > delta
    margin: Fraction = Fraction(0)

    def __bool__(self) -> bool:
        return self.inside


def member(point, vertices: PointSet) -> Membership:
    """Hull membership by the separation LP.

    Maximizes ``a.p - delta`` subject to ``a.v <= delta`` for every vertex and
    ``-1 <= a_j <= 1``. A positive optimum yields a separating hyperplane.
    """
    labels = vertices.labels
    p = _coefs(point, labels)
    if not len(vertices):
        return Membership(False, None, Fraction(1))
    avars = [("a", k) for k in range(len(labels))]
    var_labels = tuple(avars) + (("delta",),)
    nvars = len(var_labels)
    ineqs = []
    for v in vertices:
        ineqs.append((tuple(v) + (Fraction(-1),), Fraction(0)))
    for k in range(len(labels)):
        row = [Fraction(0)] * nvars
        row[k] = Fraction(1)
        ineqs.append((tuple(row), Fraction(1)))
        row = [Fraction(0)] * nvars
        row[k] = Fraction(-1)
        ineqs.append((tuple(row), Fraction(1)))
    system = LinearSystem(var_labels, (), tuple(ineqs))
    res = LPModel(system).maximize(tuple(p) + (Fraction(-1),))
    if res.status != "optimal":
        raise AssertionError(f"separation LP ended {res.status}")
    if res.value <= 0:
        return Membership(True)
    sol = res.optimizer.values
    a = RVector(labels, sol[:-1])
    return Membership(False, (a, sol[-1]), res.value)


@dataclass(frozen=True)
class PolytopeComparison:
    equal: bool
    counterexample: tuple | None = None
    reason: str = ""
    vertices: PointSet | None = None

    def __bool__(self) -> bool:
        return self.equal


def equal_polytopes(
    system: LinearSystem, vertices: PointSet, guard: int = DEFAULT_VERTEX_GUARD
) -> PolytopeComparison:
    """Check that the polytope of ``system`` is conv(vertices).

    Every vertex of the system must be one of the given points, and every
    given point must satisfy the system.
    """
    if system.labels != vertices.labels:
        raise LabelMismatch("system and vertex labels differ")
    found = enumerate_vertices(system, guard)
    known = vertices.as_set()
    for v in found:
        if v not in known:
            return PolytopeComparison(False, v, "vertex of the system outside the point set", found)
    for p in vertices:
        if not system.satisfied_by(p):
            return PolytopeComparison(False, p, "point violates the system", found)
    return PolytopeComparison(True, None, "", found)
