"""Named test instances.

Each entry gives block sizes and a hyperedge list over block ids; the
instance itself carries one unit term per hyperedge so that inducing the
hypergraph recovers exactly those edges.
"""

from __future__ import annotations

from .hypergraph import Hypergraph
from .instance import MCPPInstance, Monomial, MonomialFamily, Partition

SPECS = {
    "EDGE22": ((2, 2), [(1, 2)]),
    "EDGE32": ((3, 2), [(1, 2)]),
    "EDGE33": ((3, 3), [(1, 2)]),
    "PATH3": ((2, 2, 2), [(1, 2), (2, 3)]),
    "PATH3_MIXED": ((3, 2, 2), [(1, 2), (2, 3)]),
    "STAR3": ((2, 2, 2, 2), [(1, 2), (1, 3), (1, 4)]),
    "EDGE3_PAIRS": ((2, 2, 2), [(1, 2, 3), (1, 2), (2, 3)]),
    "FIVE_BLOCK": ((2, 2, 2, 2, 2), [(1, 2), (2, 3), (2, 4)]),
    "TWO_3EDGES": ((2, 2, 2, 2), [(1, 2, 3), (1, 2, 4)]),
    "EMPTY22": ((2, 2), []),
    "FULL3": ((2, 2, 2), [(1, 2, 3), (1, 2), (1, 3), (2, 3)]),
    "TWO_3EDGES_PLUS_PAIR": ((2, 2, 2, 2), [(1, 2, 3), (1, 2, 4), (1, 2)]),
    "STAR_3EDGES": ((2, 2, 2, 2, 2), [(1, 2, 3), (1, 2, 4), (1, 2, 5)]),
    "TRI": ((2, 2, 2), [(1, 2), (2, 3), (1, 3)]),
    "C4": ((2, 2, 2, 2), [(1, 2), (2, 3), (3, 4), (1, 4)]),
}

# alpha-acyclic instances whose join-tree system is small enough for vertex enumeration
VERTEX_BATTERY = (
    "EDGE22",
    "EDGE32",
    "EDGE33",
    "PATH3",
    "PATH3_MIXED",
    "STAR3",
    "EDGE3_PAIRS",
    "FIVE_BLOCK",
    "TWO_3EDGES",
    "EMPTY22",
)

# alpha-acyclic instances for LP-based checks
LP_BATTERY = VERTEX_BATTERY + ("FULL3", "TWO_3EDGES_PLUS_PAIR", "STAR_3EDGES")

DOWNWARD_CLOSED_BATTERY = ("EDGE22", "EDGE32", "PATH3", "PATH3_MIXED", "STAR3", "FULL3", "EMPTY22")


def instance(name: str, coefs=None) -> MCPPInstance:
    sizes, edges = SPECS[name]
    p = Partition.of_sizes(*sizes)
    terms = []
    for k, e in enumerate(edges):
        c = 1 if coefs is None else coefs[k]
        terms.append(Monomial(tuple(p.block(I)[0] for I in e), c))
    return MCPPInstance(p, tuple(terms), name=name)


def family(name: str) -> MonomialFamily:
    sizes, edges = SPECS[name]
    p = Partition.of_sizes(*sizes)
    return MonomialFamily(p, Hypergraph(p.ids, tuple(edges)))


def disagreement_instance(name: str = "TRI") -> MCPPInstance:
    """Rewards x_i x_j for every edge and every pair of differing choices
    (first index of one block with the second of the other, and vice versa)."""
    sizes, edges = SPECS[name]
    p = Partition.of_sizes(*sizes)
    terms = []
    for I, K in edges:
        a, b = p.block(I), p.block(K)
        terms.append(Monomial((a[0], b[1]), 1))
        terms.append(Monomial((a[1], b[0]), 1))
    return MCPPInstance(p, tuple(terms), name=f"{name}-disagreement")
