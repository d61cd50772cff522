"""Exact polyhedral toolkit for multiple choice polynomial programs."""

from .errors import MCPPError
from .exactmath import LinearSystem, LPModel, PointSet, RVector, enumerate_vertices, lp_maximize
from .hypergraph import Hypergraph, JoinTree, build_join_tree, is_alpha_acyclic
from .instance import MCPPInstance, Monomial, MonomialFamily, Partition, close_family
from .solver import SolveReport, solve

__all__ = [
    "Hypergraph",
    "JoinTree",
    "LPModel",
    "LinearSystem",
    "MCPPError",
    "MCPPInstance",
    "Monomial",
    "MonomialFamily",
    "Partition",
    "PointSet",
    "RVector",
    "SolveReport",
    "build_join_tree",
    "close_family",
    "enumerate_vertices",
    "is_alpha_acyclic",
    "lp_maximize",
    "solve",
]
