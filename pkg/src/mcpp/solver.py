"""Exact MCPP solving: the join-tree LP for alpha-acyclic instances, brute force otherwise.

Argmax ties are broken toward the choice point that comes first in
``itertools.product`` order over the blocks (smallest index in the first
block, then the second, and so on), on both routes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InternalInvariantViolation, NotAlphaAcyclic, ValidationError
from .exactmath import LinearSystem, LPModel
from .hypergraph import is_alpha_acyclic
from .instance import MCPPInstance, MonomialFamily, close_family
from .oracle import DEFAULT_GUARD, brute_optimum
from .relaxation import build_MC_T

METHODS = ("auto", "lp", "brute")


@dataclass(frozen=True)
class SolveReport:
    optimum: Fraction
    argmax: tuple
    method: str  # "lp-jointree" or "brute-force"
    acyclic: bool
    stats: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "optimum": str(self.optimum),
            "argmax": list(self.argmax),
            "method": self.method,
            "acyclic": self.acyclic,
            "stats": self.stats,
        }

    @classmethod
    def from_dict(cls, data: dict) -> SolveReport:
        return cls(
            Fraction(data["optimum"]),
            tuple(data["argmax"]),
            data["method"],
            bool(data["acyclic"]),
            dict(data.get("stats", {})),
        )


def _lp_argmax(fam: MonomialFamily, system: LinearSystem, model: LPModel, objective, best: Fraction):
    """First optimal choice point in product order, found by fixing blocks one at a time."""
    labels = system.labels
    pos = {J: k for k, J in enumerate(labels)}
    fixed = [(objective.values, best)]
    pivots = 0
    chosen = []
    for block in fam.partition.blocks:
        for i in block:
            row = [Fraction(0)] * len(labels)
            row[pos[(i,)]] = Fraction(1)
            face = LinearSystem(labels, system.equalities + tuple(fixed), system.inequalities)
            res = LPModel(face).maximize(row)
            pivots += res.pivots
            if res.status == "optimal" and res.value == 1:
                fixed.append((tuple(row), Fraction(1)))
                chosen.append(i)
                break
        else:
            raise InternalInvariantViolation(f"no index of block {list(block)} is optimal")
    return chosen, pivots


def solve(inst: MCPPInstance, method: str = "auto", guard: int = DEFAULT_GUARD) -> SolveReport:
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}")
    start = time.perf_counter()
    fam = close_family(inst)
    H = fam.hypergraph
    acyclic, witness = is_alpha_acyclic(H)
    p = inst.partition
    stats = {
        "rank": H.rank,
        "max_block_size": max(len(b) for b in p.blocks),
        "family_size": len(fam),
    }
    use_lp = method == "lp" or (method == "auto" and acyclic)
    if use_lp and not acyclic:
        raise NotAlphaAcyclic("the LP route needs an alpha-acyclic hypergraph")
    if not use_lp:
        value, x = brute_optimum(inst, guard)
        stats["wall_time"] = time.perf_counter() - start
        return SolveReport(value, x, "brute-force", acyclic, stats)

    rs = build_MC_T(fam, witness)
    stats["rows"] = rs.counts()
    objective = fam.objective(inst)
    model = LPModel(rs.system)
    res = model.maximize(objective)
    if res.status != "optimal":
        raise InternalInvariantViolation(f"join-tree LP ended {res.status}")
    w = res.optimizer
    if any(v not in (0, 1) for v in w.values):
        raise InternalInvariantViolation("join-tree LP optimum is fractional on an alpha-acyclic instance")
    pivots = res.pivots
    if res.unique:
        chosen = [i for b in p.blocks for i in b if w[(i,)] == 1]
    else:
        chosen, extra = _lp_argmax(fam, rs.system, model, objective, res.value)
        pivots += extra
    x = tuple(int(i in chosen) for i in range(1, p.n + 1))
    if len(chosen) != len(p.blocks) or any(sum(x[i - 1] for i in b) != 1 for b in p.blocks):
        raise InternalInvariantViolation("LP singletons do not form a choice point")
    value = res.value + inst.offset
    if inst.value(x) != value:
        raise InternalInvariantViolation("LP value differs from f at the recovered choice point")
    stats["pivots"] = pivots
    stats["wall_time"] = time.perf_counter() - start
    return SolveReport(value, x, "lp-jointree", acyclic, stats)
