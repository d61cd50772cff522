"""Brute-force ground truth by explicit enumeration.

Choice points are listed in ``itertools.product`` order over the blocks: the
first point picks the smallest index of every block, and the last block
varies fastest. Every "lexicographically first" tie-break in the package
refers to this order.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import GuardExceeded
from .exactmath import PointSet, RVector
from .hypergraph import Hypergraph
from .instance import MCPPInstance, MonomialFamily, Partition

DEFAULT_GUARD = 4096


def _check_guard(count: int, guard: int, what: str) -> None:
    if count > guard:
        raise GuardExceeded(f"{what} needs {count} points, guard is {guard}")


def choices(p: Partition, guard: int = DEFAULT_GUARD):
    """Choice tuples (one index per block) in canonical order."""
    _check_guard(math.prod(len(b) for b in p.blocks), guard, "choice enumeration")
    return itertools.product(*p.blocks)


def x_of(choice, n: int) -> tuple:
    x = [0] * n
    for i in choice:
        x[i - 1] = 1
    return tuple(x)


def enumerate_X(p: Partition, guard: int = DEFAULT_GUARD) -> list[tuple]:
    return [x_of(c, p.n) for c in choices(p, guard)]


def w_of(x, fam: MonomialFamily) -> RVector:
    return RVector(fam.labels, tuple(int(all(x[i - 1] for i in J)) for J in fam.labels))


def enumerate_SH(fam: MonomialFamily, guard: int = DEFAULT_GUARD) -> PointSet:
    """The multilinear set: images of all choice points, in canonical order."""
    pts = [w_of(x, fam).values for x in enumerate_X(fam.partition, guard)]
    return PointSet(fam.labels, tuple(pts))


def mp_labels(H: Hypergraph) -> tuple:
    """Coordinates of the unconstrained multilinear set: L(V) followed by E."""
    return H.groups()


def enumerate_MP_vertices(H: Hypergraph, guard: int = DEFAULT_GUARD) -> PointSet:
    labels = mp_labels(H)
    _check_guard(2 ** len(H.vertices), guard, "multilinear vertex enumeration")
    pts = []
    for bits in itertools.product((0, 1), repeat=len(H.vertices)):
        z = dict(zip(H.vertices, bits))
        pts.append(tuple(int(all(z[v] for v in e)) for e in labels))
    return PointSet(labels, tuple(pts))


def enumerate_MCleq_vertices(fam: MonomialFamily, D, guard: int = DEFAULT_GUARD) -> PointSet:
    """0-1 points over the labels avoiding D: each block picks one index
    outside D or nothing, and monomials are products."""
    D = set(fam.validate_transversal(D))
    labels = fam.leq(D)
    options = [tuple(i for i in b if i not in D) + (None,) for b in fam.partition.blocks]
    _check_guard(math.prod(len(o) for o in options), guard, "MC_leq vertex enumeration")
    pts = []
    for pick in itertools.product(*options):
        on = {i for i in pick if i is not None}
        pts.append(tuple(int(set(J) <= on) for J in labels))
    return PointSet(labels, tuple(pts))


def brute_optimum(inst: MCPPInstance, guard: int = DEFAULT_GUARD) -> tuple[Fraction, tuple]:
    """Exact max of f over all choice points; the first maximizer in canonical order wins."""
    inst.validate()
    best, arg = None, None
    for x in enumerate_X(inst.partition, guard):
        v = inst.value(x)
        if best is None or v > best:
            best, arg = v, x
    return best, arg

