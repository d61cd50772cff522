"""Gluing two sub-hypergraphs: the precondition and an exact check of the
claim that the polytope of H is cut out by the polytopes of the parts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotACover, ValidationError
from .exactmath import LinearSystem, PointSet, enumerate_vertices
from .hypergraph import Hypergraph, is_alpha_acyclic
from .instance import MonomialFamily, Partition
from .oracle import enumerate_SH
from .polytope import member
from .relaxation import build_MC_T

DEFAULT_DECOMPOSE_GUARD = 64


@dataclass(frozen=True)
class Decomposition:
    H1: Hypergraph
    H2: Hypergraph

    @property
    def shared(self) -> tuple:
        return tuple(sorted(set(self.H1.vertices) & set(self.H2.vertices)))

    @property
    def union(self) -> Hypergraph:
        return self.H1 | self.H2

    def covers(self, H: Hypergraph) -> bool:
        u = self.union
        return u.vertices == H.vertices and u.edge_set == H.edge_set


def check_precondition(d: Decomposition, H: Hypergraph | None = None) -> bool:
    """Shared vertices are empty, a single block, or an edge of both parts."""
    if H is not None and not d.covers(H):
        raise NotACover("the two parts do not cover the hypergraph")
    shared = d.shared
    if len(shared) <= 1:
        return True
    return d.H1.has_edge(shared) and d.H2.has_edge(shared)


def sub_family(fam: MonomialFamily, part: Hypergraph) -> MonomialFamily:
    """Family of a part over its own blocks; labels stay original index tuples."""
    ids = part.vertices
    renum = {v: k for k, v in enumerate(ids, start=1)}
    p = Partition(tuple(fam.partition.block(v) for v in ids), fam.partition.n)
    H = Hypergraph(tuple(renum.values()), tuple(tuple(renum[v] for v in e) for e in part.edges))
    return MonomialFamily(p, H)


@dataclass(frozen=True)
class DecompositionReport:
    ok: bool
    precondition: bool
    routes: tuple  # "jointree" or "hull-multipliers" per part
    intersection_vertices: int
    counterexample: tuple | None = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "precondition": self.precondition,
            "routes": list(self.routes),
            "intersection_vertices": self.intersection_vertices,
            "counterexample": None
            if self.counterexample is None
            else [str(v) for v in self.counterexample],
            "reason": self.reason,
        }


def _part_rows(fam: MonomialFamily, part: Hypergraph, tag: int):
    """The part's polytope on its own coordinates, plus multiplier labels if any."""
    sub = sub_family(fam, part)
    if is_alpha_acyclic(sub.hypergraph)[0]:
        sys = build_MC_T(sub).system
        extra = ()
        route = "jointree"
    else:
        pts = enumerate_SH(sub)
        extra = tuple(("lambda", tag, k) for k in range(len(pts)))
        eqs = []
        for j, J in enumerate(sub.labels):
            coefs = {J: Fraction(1)}
            for k, s in enumerate(pts):
                if s[j]:
                    coefs[extra[k]] = Fraction(-s[j])
            eqs.append((coefs, 0))
        eqs.append(({lam: 1 for lam in extra}, 1))
        sys = LinearSystem.build(
            sub.labels + extra, eqs, LinearSystem.nonnegativity_rows(extra)
        )
        route = "hull-multipliers"
    return sys, extra, route


def _glue(d: Decomposition, fam: MonomialFamily):
    systems, extras, routes = [], (), []
    for k, part in enumerate((d.H1, d.H2), start=1):
        sys, extra, route = _part_rows(fam, part, k)
        systems.append(sys)
        extras += extra
        routes.append(route)
    labels = fam.labels + extras
    combined = systems[0].reindexed(labels) & systems[1].reindexed(labels)
    return combined, systems, routes


def verify_decomposition(
    d: Decomposition,
    fam: MonomialFamily,
    guard: int = DEFAULT_DECOMPOSE_GUARD,
    require_precondition: bool = True,
) -> DecompositionReport:
    """Compare the intersection of the part polytopes with conv of the multilinear set.

    Each part contributes its join-tree system when alpha-acyclic, and
    otherwise a convex-multiplier description over its multilinear points.
    Vertices of the combined system are projected to the family coordinates
    and tested for membership in the hull; conversely every multilinear point
    of H must satisfy both parts.
    """
    H = fam.hypergraph
    if not d.covers(H):
        raise NotACover("the two parts do not cover the hypergraph")
    pre = check_precondition(d)
    if require_precondition and not pre:
        raise ValidationError(
            f"shared blocks {list(d.shared)} are not empty, a single block or a common edge",
            kind="precondition-failed",
        )
    combined, systems, routes = _glue(d, fam)
    verts = enumerate_vertices(combined, guard)
    n = len(fam.labels)
    projected = sorted({v[:n] for v in verts})
    SH = enumerate_SH(fam)
    known = SH.as_set()
    for w in projected:
        if w not in known and not member(w, SH):
            return DecompositionReport(
                False, pre, tuple(routes), len(projected), w, "intersection point outside the hull"
            )
    parts = [sub_family(fam, part) for part in (d.H1, d.H2)]
    pos = {J: k for k, J in enumerate(fam.labels)}
    for s in SH:
        for sub, sys, route in zip(parts, systems, routes):
            restricted = tuple(s[pos[J]] for J in sub.labels)
            if route == "jointree":
                inside = sys.satisfied_by(restricted)
            else:
                inside = restricted in enumerate_SH(sub).as_set()
            if not inside:
                return DecompositionReport(
                    False, pre, tuple(routes), len(projected), s, "multilinear point cut off by a part"
                )
    return DecompositionReport(True, pre, tuple(routes), len(projected))


def intersection_points(d: Decomposition, fam: MonomialFamily, guard: int = DEFAULT_DECOMPOSE_GUARD) -> PointSet:
    """Vertices of the glued polytope, projected to the family coordinates."""
    combined, _, _ = _glue(d, fam)
    n = len(fam.labels)
    return PointSet(fam.labels, tuple(sorted({v[:n] for v in enumerate_vertices(combined, guard)})))
